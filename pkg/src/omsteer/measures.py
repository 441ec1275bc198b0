"""Steady-state covariance matrix and two-mode nonlocality measures.

The covariance matrix V (elements <R_k R_l + R_l R_k>/2 over the ordering
[X_a1, Y_a1, X_a2, Y_a2, X_b, Y_b]) solves the Lyapunov equation
M V + V M^T + D = 0 for a strictly stable drift matrix M.  From any 4x4
two-mode reduction the package computes the logarithmic negativity, the
directional Gaussian steering in both directions, and the quadrature
variances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import NumericalError, UnphysicalInputError, ValidationError
from .stability import max_real_eigenvalue

MODE_INDEX = {"a1": 0, "a2": 1, "b": 2}

# symplectic form for three modes, [R_j, R_k] = i * OMEGA_jk
OMEGA = np.kron(np.eye(3), np.array([[0.0, 1.0], [-1.0, 0.0]]))

_RADICAND_TOL = 1e-12

# Reported-zero guards.  Exactly separable states sit on the branch point of
# the eta- square root, where covariance rounding (~1e-11 after the Lyapunov
# solve) is amplified to ~sqrt-scale; raw values below these thresholds are
# numerically indistinguishable from zero and are reported as exact zeros.
# Raw values are kept unguarded for diagnostics.
LOG_NEG_ZERO_TOL = 1e-8
STEERING_ZERO_TOL = 1e-9


def solve_lyapunov(m: np.ndarray, d: np.ndarray, *, check_stable: bool = True) -> np.ndarray:
    """Solve M V + V M^T + D = 0 for the steady-state covariance matrix.

    Uses the Kronecker-vectorized dense linear system; at 6x6 this is
    exact and cheap.  Raises NumericalError if M is not strictly stable
    (skippable with check_stable=False when the caller has already
    verified it) or if the system is numerically singular, i.e. M is
    marginally stable.
    """
    m = np.asarray(m, dtype=float)
    d = np.asarray(d, dtype=float)
    n = m.shape[0]
    if check_stable:
        max_re = max_real_eigenvalue(m)
        if max_re >= 0.0:
            raise NumericalError(
                f"drift matrix is not strictly stable (max Re eig = {max_re:.3e})")
    eye = np.eye(n)
    kron = np.kron(eye, m) + np.kron(m, eye)
    try:
        vec = np.linalg.solve(kron, -d.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "Lyapunov system is singular (marginally stable drift); "
            f"cond estimate {np.linalg.cond(kron):.3e}") from exc
    v = vec.reshape(n, n)
    v = (v + v.T) / 2.0
    resid = np.abs(m @ v + v @ m.T + d).max()
    bound = 1e-10 * max(1.0, np.abs(d).max())
    if not resid <= bound:
        raise NumericalError(
            f"Lyapunov residual {resid:.3e} exceeds {bound:.3e}; "
            f"cond estimate {np.linalg.cond(kron):.3e}")
    return v


@dataclass(frozen=True, eq=False)
class TwoModeCM:
    """4x4 covariance of a mode pair, mode_i quadratures first."""

    v12: np.ndarray
    mode_i: str
    mode_j: str

    @property
    def v1(self) -> np.ndarray:
        return self.v12[:2, :2]

    @property
    def v2(self) -> np.ndarray:
        return self.v12[2:, 2:]

    @property
    def vc(self) -> np.ndarray:
        return self.v12[:2, 2:]


def reduce_two_mode(v: np.ndarray, mode_i: str, mode_j: str) -> TwoModeCM:
    """Extract the 4x4 covariance of (mode_i, mode_j) from the 6x6 matrix."""
    if mode_i not in MODE_INDEX or mode_j not in MODE_INDEX:
        raise ValidationError(f"modes must be in {sorted(MODE_INDEX)}")
    if mode_i == mode_j:
        raise ValidationError(f"mode pair must be distinct, got ({mode_i}, {mode_j})")
    i, j = MODE_INDEX[mode_i], MODE_INDEX[mode_j]
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    return TwoModeCM(v12=np.asarray(v, dtype=float)[np.ix_(idx, idx)],
                     mode_i=mode_i, mode_j=mode_j)


class LogNegativity(NamedTuple):
    e_n: float
    eta_minus: float
    sigma: float


def _dets(tm: TwoModeCM) -> tuple[float, float, float, float]:
    v1 = float(np.linalg.det(tm.v1))
    v2 = float(np.linalg.det(tm.v2))
    vc = float(np.linalg.det(tm.vc))
    v12 = float(np.linalg.det(tm.v12))
    return v1, v2, vc, v12


def log_negativity(tm: TwoModeCM) -> LogNegativity:
    """Logarithmic negativity E_N = max{0, -ln(2 eta-)} of a two-mode state.

    eta- = sqrt((Sigma - sqrt(Sigma^2 - 4 det V12)) / 2) is the smallest
    symplectic eigenvalue after partial transposition, with
    Sigma = det V1 + det V2 - 2 det Vc.  The inner radicand is clamped to
    zero when within -1e-12 of it; separable states (eta- >= 1/2) give
    E_N = 0 without error.
    """
    det1, det2, detc, det12 = _dets(tm)
    sigma = det1 + det2 - 2.0 * detc
    if det12 <= 0.0:
        raise UnphysicalInputError(f"det V12 = {det12:.3e} <= 0")
    disc = sigma * sigma - 4.0 * det12
    if disc < 0.0:
        if disc < -_RADICAND_TOL:
            raise UnphysicalInputError(
                f"Sigma^2 - 4 det V12 = {disc:.3e} below the numerical guard")
        disc = 0.0
    eta = math.sqrt(max((sigma - math.sqrt(disc)) / 2.0, 0.0))
    raw = -math.log(2.0 * eta)
    return LogNegativity(e_n=raw if raw > LOG_NEG_ZERO_TOL else 0.0,
                         eta_minus=eta, sigma=sigma)


def _steering_raw(tm: TwoModeCM, direction: str) -> float:
    det1, det2, _, det12 = _dets(tm)
    if det12 <= 0.0:
        raise UnphysicalInputError(f"det V12 = {det12:.3e} <= 0")
    if direction == "1->2":
        num = det1
    elif direction == "2->1":
        num = det2
    else:
        raise ValidationError(f"direction must be '1->2' or '2->1', got {direction!r}")
    return 0.5 * math.log(num / (4.0 * det12))


def steering(tm: TwoModeCM, direction: str) -> float:
    """Gaussian steering of the pair, max{0, ln(det V_i / (4 det V12)) / 2}.

    direction "1->2": mode_i steers mode_j (uses det V1); "2->1" the
    reverse (det V2).  Raw values below the numerical-zero threshold are
    reported as exactly zero.
    """
    raw = _steering_raw(tm, direction)
    return raw if raw > STEERING_ZERO_TOL else 0.0


def quadrature_variances(v: np.ndarray, mode: str) -> tuple[float, float]:
    """(var X, var Y) of one mode: diagonal of its 2x2 block."""
    if mode not in MODE_INDEX:
        raise ValidationError(f"mode must be in {sorted(MODE_INDEX)}")
    i = MODE_INDEX[mode]
    v = np.asarray(v, dtype=float)
    return float(v[2 * i, 2 * i]), float(v[2 * i + 1, 2 * i + 1])


def physicality_margin(v: np.ndarray) -> float:
    """Smallest eigenvalue of V + i OMEGA / 2; >= 0 (to rounding) for physical states."""
    h = np.asarray(v, dtype=float) + 0.5j * OMEGA
    return float(np.linalg.eigvalsh(h).min())


@dataclass(frozen=True)
class NonlocalityReport:
    """All pairwise measures for one mode pair, raw values included.

    raw_* keep the pre-max{0,...} values so diagnostics can distinguish a
    barely separable state from a deeply separable one.
    """

    mode_i: str
    mode_j: str
    e_n: float
    g_1to2: float
    g_2to1: float
    eta_minus: float
    sigma: float
    raw_e_n: float
    raw_g_1to2: float
    raw_g_2to1: float
    var_x_1: float
    var_y_1: float
    var_x_2: float
    var_y_2: float
    stable: bool = True

    def with_stability(self, stable: bool) -> "NonlocalityReport":
        return replace(self, stable=stable)


def two_mode_report(v: np.ndarray, mode_i: str, mode_j: str) -> NonlocalityReport:
    """Compute every pair measure for (mode_i, mode_j) from a 6x6 covariance."""
    tm = reduce_two_mode(v, mode_i, mode_j)
    ln = log_negativity(tm)
    raw12 = _steering_raw(tm, "1->2")
    raw21 = _steering_raw(tm, "2->1")
    vx1, vy1 = quadrature_variances(v, mode_i)
    vx2, vy2 = quadrature_variances(v, mode_j)
    return NonlocalityReport(
        mode_i=mode_i, mode_j=mode_j,
        e_n=ln.e_n,
        g_1to2=raw12 if raw12 > STEERING_ZERO_TOL else 0.0,
        g_2to1=raw21 if raw21 > STEERING_ZERO_TOL else 0.0,
        eta_minus=ln.eta_minus, sigma=ln.sigma,
        raw_e_n=-math.log(2.0 * ln.eta_minus), raw_g_1to2=raw12, raw_g_2to1=raw21,
        var_x_1=vx1, var_y_1=vy1, var_x_2=vx2, var_y_2=vy2,
    )
