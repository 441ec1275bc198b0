"""Model parameters, self-consistent steady state, and the linearized matrices.

Two optical modes a1, a2 (coupled with strength J) and one mechanical mode b
(coupled to a1 with single-photon strength g) are driven by a pump of
amplitude E on a1.  Mode a1 additionally sees a weak squeezed input
characterized by a squeezing parameter r and reference phase theta; the
squeezed input enters the fluctuation dynamics only, through the diffusion
matrix.

Conventions used throughout the package:

* all rates/detunings are dimensionless, in units of the mechanical
  frequency (omega_m = 1 internally);
* quadratures X = (o + o^dag)/sqrt(2), Y = (o - o^dag)/(i sqrt(2)), so the
  vacuum variance is 1/2;
* quadrature ordering is [X_a1, Y_a1, X_a2, Y_a2, X_b, Y_b].
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HBAR = 1.054571817e-34  # J s
C_LIGHT = 299792458.0   # m / s

_POSITIVE_FIELDS = ("kappa1", "kappa2", "gamma_m")
_NONNEGATIVE_FIELDS = ("g", "J", "E", "n_a2", "m_th")


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless model parameters (units of the mechanical frequency).

    kappa1, kappa2   cavity decay rates of modes a1, a2
    gamma_m          mechanical decay rate
    g                single-photon optomechanical coupling
    J                inter-cavity coupling
    Delta1, Delta2   pump detunings of a1, a2 (any sign)
    E                pump amplitude (>= 0)
    n_a2             thermal occupation of the a2 input noise
    m_th             thermal occupation of the mechanical input noise
    """

    kappa1: float
    kappa2: float
    gamma_m: float
    g: float
    J: float
    Delta1: float
    Delta2: float
    E: float
    n_a2: float = 0.0
    m_th: float = 0.0
    omega_m: float = 1.0

    def __post_init__(self):
        for name in _POSITIVE_FIELDS:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValidationError(f"{name} must be positive and finite, got {value!r}")
        for name in _NONNEGATIVE_FIELDS:
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValidationError(f"{name} must be >= 0 and finite, got {value!r}")
        for name in ("Delta1", "Delta2"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.omega_m != 1.0:
            raise ValidationError("omega_m must be 1 in internal units; "
                                  "convert physical inputs with physical_to_dimensionless")

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SqueezedField:
    """Squeezed input on mode a1: squeezing parameter r, reference phase theta.

    theta is stored wrapped to [0, 2*pi).
    """

    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValidationError(f"r must be >= 0 and finite, got {self.r!r}")
        if not math.isfinite(self.theta):
            raise ValidationError("theta must be finite")
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))

    def replace(self, **changes) -> "SqueezedField":
        return dataclasses.replace(self, **changes)


def squeezed_moments(field: SqueezedField) -> tuple[float, complex]:
    """Second moments of the squeezed input: N = sinh^2(r), M = e^{i theta} sinh(r) cosh(r)."""
    sh = math.sinh(field.r)
    ch = math.cosh(field.r)
    return sh * sh, cmath.exp(1j * field.theta) * sh * ch


@dataclass(frozen=True)
class SteadyState:
    """Self-consistent operating point of the pumped system.

    delta1_prime is the effective a1 detuning Delta1 - 2 g Re<b>; the
    effective coupling is G = g <a1>.  n_roots counts the distinct real
    fixed points (up to 3 in the bistable regime) and selected_branch
    labels the one returned.
    """

    a1_mean: complex
    a2_mean: complex
    b_mean: complex
    delta1_prime: float
    G: complex
    n_roots: int
    selected_branch: str

    @property
    def Gx(self) -> float:
        return self.G.real

    @property
    def Gy(self) -> float:
        return self.G.imag


def _real_cubic_roots(a: float, b: float, c: float, d: float) -> list[float]:
    """All real roots of a x^3 + b x^2 + c x + d (a != 0), by the depressed cubic."""
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = -4.0 * p ** 3 - 27.0 * q * q
    scale = max(abs(4.0 * p ** 3), 27.0 * q * q, 1e-300)
    if disc > 1e-12 * scale:
        # three distinct real roots (trigonometric form; p < 0 here)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        ts = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]
    elif disc < -1e-12 * scale:
        # one real root (Cardano, in the numerically stable single-cbrt form)
        rad = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
        u = -q / 2.0 + rad if q <= 0 else -q / 2.0 - rad
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        ts = [u + (-p / (3.0 * u) if u != 0.0 else 0.0)]
    else:
        # boundary: repeated roots
        if p == 0.0:
            ts = [0.0]
        else:
            ts = [3.0 * q / p, -3.0 * q / (2.0 * p)]
    return [t - shift for t in ts]


def solve_steady_state(params: SystemParams, policy: str = "lowest") -> SteadyState:
    """Solve the classical fixed point with the detuning shift included.

    The effective detuning x = Delta1 - 2 g Re<b> obeys a real cubic
    (x - Delta1) * |den(x)|^2 + K = 0 with den(x) = J^2 + (i x + kappa1/2)
    (i Delta2 + kappa2/2); the intracavity amplitudes follow from x.  All
    real roots are found analytically and polished with damped Newton
    steps, then ordered by increasing pump power |<a1>|^2.

    policy selects the returned branch: "lowest" (default) or "highest"
    pump power, or "index:<k>" with k a 0-based position in that order.
    """
    wm = params.omega_m
    c2 = 1j * params.Delta2 + params.kappa2 / 2.0
    abs_c2_sq = params.Delta2 ** 2 + (params.kappa2 / 2.0) ** 2

    # |den(x)|^2 = p x^2 + q x + s, a positive quadratic
    A = params.J ** 2 + params.kappa1 * params.kappa2 / 4.0
    B = params.Delta2 * params.kappa1 / 2.0
    p = abs_c2_sq
    q = 2.0 * (B * params.kappa2 / 2.0 - A * params.Delta2)
    s = A * A + B * B

    if params.E == 0.0 or params.g == 0.0:
        roots = [params.Delta1]
    else:
        K = (2.0 * params.g ** 2 * params.E ** 2 * abs_c2_sq * wm
             / (wm ** 2 + (params.gamma_m / 2.0) ** 2))
        D1 = params.Delta1
        roots = _real_cubic_roots(p, q - p * D1, s - q * D1, K - s * D1)

        def h(x):
            return (x - D1) * ((p * x + q) * x + s) + K

        def hp(x):
            return ((p * x + q) * x + s) + (x - D1) * (2.0 * p * x + q)

        def residual(x):
            return abs(x - D1 + K / ((p * x + q) * x + s))

        tol = 1e-13 * max(1.0, abs(D1))
        polished = []
        for x in roots:
            for _ in range(60):
                if residual(x) <= tol:
                    break
                der = hp(x)
                if der == 0.0:
                    break
                step = h(x) / der
                # damp the step if it does not reduce |h|
                for _ in range(40):
                    if abs(h(x - step)) <= abs(h(x)) or step == 0.0:
                        break
                    step *= 0.5
                if x - step == x:
                    break
                x -= step
            polished.append(x)
        polished.sort()
        roots = []
        for x in polished:
            if not roots or abs(x - roots[-1]) > 1e-9 * max(1.0, abs(x)):
                roots.append(x)

    def amplitudes(x):
        den = params.J ** 2 + (1j * x + params.kappa1 / 2.0) * c2
        a1 = params.E * c2 / den
        a2 = -1j * params.J * a1 / c2
        b = 1j * params.g * abs(a1) ** 2 / (1j * wm + params.gamma_m / 2.0)
        return a1, a2, b

    branches = sorted((amplitudes(x) + (x,) for x in roots),
                      key=lambda t: abs(t[0]) ** 2)
    n = len(branches)
    labels = {1: ("lowest",), 2: ("lowest", "highest"),
              3: ("lowest", "middle", "highest")}[n]

    if policy == "lowest":
        k = 0
    elif policy == "highest":
        k = n - 1
    elif policy.startswith("index:"):
        try:
            k = int(policy[len("index:"):])
        except ValueError:
            raise ValidationError(f"bad branch policy {policy!r}") from None
        if not 0 <= k < n:
            raise ValidationError(f"branch index {k} out of range: {n} root(s) found")
    else:
        raise ValidationError(
            f"unknown branch policy {policy!r}; use lowest, highest, or index:<k>")

    a1, a2, b, x = branches[k]
    return SteadyState(a1_mean=a1, a2_mean=a2, b_mean=b, delta1_prime=x,
                       G=params.g * a1, n_roots=n, selected_branch=labels[k])


def build_drift(params: SystemParams, ss: SteadyState) -> np.ndarray:
    """6x6 drift matrix of the linearized quadrature dynamics dR/dt = M R + noise."""
    k1, k2 = params.kappa1 / 2.0, params.kappa2 / 2.0
    gm = params.gamma_m / 2.0
    wm = params.omega_m
    d1p, d2 = ss.delta1_prime, params.Delta2
    J = params.J
    gx, gy = ss.Gx, ss.Gy
    return np.array([
        [-k1,       d1p,  0.0,  J,   -2.0 * gy, 0.0],
        [-d1p,     -k1,  -J,    0.0,  2.0 * gx, 0.0],
        [0.0,       J,   -k2,   d2,   0.0,      0.0],
        [-J,        0.0, -d2,  -k2,   0.0,      0.0],
        [0.0,       0.0,  0.0,  0.0, -gm,       wm],
        [2.0 * gx,  2.0 * gy, 0.0, 0.0, -wm,   -gm],
    ])


def build_diffusion(params: SystemParams, field: SqueezedField) -> np.ndarray:
    """6x6 noise diffusion matrix D (block diagonal D1 + D2).

    The a1 block D1 carries the squeezed-input moments in real form,
      D1 = (kappa1/2) [[2N+1+2|M|cos(theta), 2|M|sin(theta)],
                       [2|M|sin(theta),      2N+1-2|M|cos(theta)]],
    and satisfies det(D1) = (kappa1/2)^2 for every r, theta.  The a2 and
    mechanical entries are thermal: (kappa2/2)(2 n_a2 + 1) and
    (gamma_m/2)(2 m_th + 1).
    """
    N, M = squeezed_moments(field)
    mabs = abs(M)
    cos_t, sin_t = math.cos(field.theta), math.sin(field.theta)
    d = np.zeros((6, 6))
    d[0, 0] = (params.kappa1 / 2.0) * (2.0 * N + 1.0 + 2.0 * mabs * cos_t)
    d[1, 1] = (params.kappa1 / 2.0) * (2.0 * N + 1.0 - 2.0 * mabs * cos_t)
    d[0, 1] = d[1, 0] = (params.kappa1 / 2.0) * 2.0 * mabs * sin_t
    d[2, 2] = d[3, 3] = (params.kappa2 / 2.0) * (2.0 * params.n_a2 + 1.0)
    d[4, 4] = d[5, 5] = (params.gamma_m / 2.0) * (2.0 * params.m_th + 1.0)
    return d


@dataclass(frozen=True)
class PhysicalParams:
    """Lab-frame inputs for conversion to the dimensionless parameter set.

    Frequencies are ordinary (cycles/s); give exactly one of laser_freq_hz
    or wavelength_m, one of q1 or kappa1_hz, one of q2 or kappa2_hz, and
    one of q_m or gamma_m_hz.  kappa/gamma given in Hz are linewidths
    (kappa_angular = 2*pi*kappa_hz).
    """

    mech_freq_hz: float
    pump_power_w: float
    laser_freq_hz: float | None = None
    wavelength_m: float | None = None
    q1: float | None = None
    kappa1_hz: float | None = None
    q2: float | None = None
    kappa2_hz: float | None = None
    q_m: float | None = None
    gamma_m_hz: float | None = None
    j_hz: float = 0.0
    g_hz: float = 0.0
    delta1_hz: float = 0.0
    delta2_hz: float = 0.0

    def __post_init__(self):
        def one_of(a, b, names):
            if (a is None) == (b is None):
                raise ValidationError(f"give exactly one of {names[0]} or {names[1]}")
        one_of(self.laser_freq_hz, self.wavelength_m, ("laser_freq_hz", "wavelength_m"))
        one_of(self.q1, self.kappa1_hz, ("q1", "kappa1_hz"))
        one_of(self.q2, self.kappa2_hz, ("q2", "kappa2_hz"))
        one_of(self.q_m, self.gamma_m_hz, ("q_m", "gamma_m_hz"))
        for name in ("mech_freq_hz", "pump_power_w", "laser_freq_hz", "wavelength_m",
                     "q1", "kappa1_hz", "q2", "kappa2_hz", "q_m", "gamma_m_hz"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value > 0.0):
                raise ValidationError(f"{name} must be positive and finite, got {value!r}")
        for name in ("j_hz", "g_hz"):
            if getattr(self, name) < 0.0:
                raise ValidationError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ConversionResult:
    params: SystemParams
    angular: dict  # intermediate angular-frequency values, rad/s


def convert_physical(phys: PhysicalParams) -> ConversionResult:
    """Convert lab-frame inputs to dimensionless parameters (omega_m = 1).

    The pump amplitude is E = sqrt(kappa1 * P_in / (hbar * omega_laser)) in
    angular-frequency units, then divided by omega_m like every other rate.
    """
    two_pi = 2.0 * math.pi
    omega_m = two_pi * phys.mech_freq_hz
    if phys.laser_freq_hz is not None:
        omega_l = two_pi * phys.laser_freq_hz
    else:
        omega_l = two_pi * C_LIGHT / phys.wavelength_m
    kappa1 = omega_l / phys.q1 if phys.q1 is not None else two_pi * phys.kappa1_hz
    kappa2 = omega_l / phys.q2 if phys.q2 is not None else two_pi * phys.kappa2_hz
    gamma_m = omega_m / phys.q_m if phys.q_m is not None else two_pi * phys.gamma_m_hz
    pump_e = math.sqrt(kappa1 * phys.pump_power_w / (HBAR * omega_l))
    angular = {
        "omega_m": omega_m,
        "omega_laser": omega_l,
        "kappa1": kappa1,
        "kappa2": kappa2,
        "gamma_m": gamma_m,
        "J": two_pi * phys.j_hz,
        "g": two_pi * phys.g_hz,
        "Delta1": two_pi * phys.delta1_hz,
        "Delta2": two_pi * phys.delta2_hz,
        "E": pump_e,
    }
    params = SystemParams(
        kappa1=kappa1 / omega_m,
        kappa2=kappa2 / omega_m,
        gamma_m=gamma_m / omega_m,
        g=angular["g"] / omega_m,
        J=angular["J"] / omega_m,
        Delta1=angular["Delta1"] / omega_m,
        Delta2=angular["Delta2"] / omega_m,
        E=pump_e / omega_m,
    )
    return ConversionResult(params=params, angular=angular)


def physical_to_dimensionless(phys: PhysicalParams) -> SystemParams:
    return convert_physical(phys).params
