"""Parameter sweeps over the full pipeline, with named figure presets.

Each grid point runs steady state -> drift/diffusion -> stability ->
Lyapunov -> requested measures.  Points at or beyond the marginal
stability boundary (max Re eigenvalue >= -1e-9) carry NaN for every
measure; the stability flag and margin are always recorded.  Points are
independent, so sweeps may fan out to worker processes without changing
the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import partial
from multiprocessing import Pool

import numpy as np

from .errors import NumericalError, ValidationError
from .measures import (
    log_negativity,
    quadrature_variances,
    reduce_two_mode,
    solve_lyapunov,
    steering,
)
from .model import (
    SqueezedField,
    SystemParams,
    build_diffusion,
    build_drift,
    solve_steady_state,
)
from .stability import max_real_eigenvalue

MARGINAL_TOL = 1e-9

SWEEPABLE = (
    "E", "J", "g", "kappa1", "kappa2", "gamma_m",
    "Delta", "Delta1", "Delta2", "m_th", "n_a2",
    "r", "theta", "kappa2/kappa1", "Delta2/Delta1",
)


class _EvalContext:
    """Caches the pieces shared between measures at one grid point."""

    def __init__(self, params, field, v, d, margin):
        self.params = params
        self.field = field
        self.v = v
        self.d = d
        self.margin = margin
        self._pairs = {}

    def pair(self, mode_i, mode_j):
        key = (mode_i, mode_j)
        if key not in self._pairs:
            self._pairs[key] = reduce_two_mode(self.v, mode_i, mode_j)
        return self._pairs[key]


MEASURES = {
    "EN_a1_b": lambda c: log_negativity(c.pair("a1", "b")).e_n,
    "G_a1_to_b": lambda c: steering(c.pair("a1", "b"), "1->2"),
    "G_b_to_a1": lambda c: steering(c.pair("a1", "b"), "2->1"),
    "EN_a1_a2": lambda c: log_negativity(c.pair("a1", "a2")).e_n,
    "G_a1_to_a2": lambda c: steering(c.pair("a1", "a2"), "1->2"),
    "G_a2_to_a1": lambda c: steering(c.pair("a1", "a2"), "2->1"),
    "var_x_a1": lambda c: quadrature_variances(c.v, "a1")[0],
    "var_y_a1": lambda c: quadrature_variances(c.v, "a1")[1],
    "D11": lambda c: c.d[0, 0],
    "D22": lambda c: c.d[1, 1],
    "max_re_eig": lambda c: c.margin,
}


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in SWEEPABLE:
            raise ValidationError(f"axis name {self.name!r} not sweepable; "
                                  f"choose from {SWEEPABLE}")
        if self.count < 2:
            raise ValidationError(f"axis {self.name}: count must be >= 2")
        if not self.lo < self.hi:
            raise ValidationError(f"axis {self.name}: min must be < max")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"axis {self.name}: scale must be linear or log")
        if self.scale == "log" and self.lo <= 0.0:
            raise ValidationError(f"axis {self.name}: log scale needs min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    params: SystemParams
    field: SqueezedField
    axes: tuple
    measures: tuple

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "measures", tuple(self.measures))
        if not 1 <= len(self.axes) <= 2:
            raise ValidationError("a sweep takes 1 or 2 axes")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate axis names: {names}")
        for name in self.measures:
            if name not in MEASURES:
                raise ValidationError(f"unknown measure {name!r}; "
                                      f"choose from {sorted(MEASURES)}")


@dataclass(frozen=True)
class PointRecord:
    coords: tuple
    stable: bool
    max_re_eig: float
    n_roots: int
    values: dict
    anomaly: bool = False


@dataclass(frozen=True, eq=False)
class SweepResult:
    spec: SweepSpec
    axis_values: tuple
    records: tuple

    def column(self, name: str) -> np.ndarray:
        """A named column over all records, row-major."""
        if name == "stable":
            return np.array([r.stable for r in self.records])
        if name == "max_re_eig":
            return np.array([r.max_re_eig for r in self.records])
        if name == "n_roots":
            return np.array([r.n_roots for r in self.records])
        for i, ax in enumerate(self.spec.axes):
            if ax.name == name:
                return np.array([r.coords[i] for r in self.records])
        if name in self.spec.measures:
            return np.array([r.values[name] for r in self.records])
        raise ValidationError(f"no column {name!r} in this sweep")


def apply_axis_value(params: SystemParams, field: SqueezedField,
                     name: str, value: float):
    """Set one sweepable parameter, returning the updated (params, field)."""
    if name == "Delta":
        return params.replace(Delta1=value, Delta2=value), field
    if name == "kappa2/kappa1":
        return params.replace(kappa2=value * params.kappa1), field
    if name == "Delta2/Delta1":
        return params.replace(Delta2=value * params.Delta1), field
    if name in ("r", "theta"):
        return params, field.replace(**{name: value})
    if name in ("E", "J", "g", "kappa1", "kappa2", "gamma_m",
                "Delta1", "Delta2", "m_th", "n_a2"):
        return params.replace(**{name: value}), field
    raise ValidationError(f"axis name {name!r} not sweepable")


def evaluate_point(params: SystemParams, field: SqueezedField,
                   measures, branch: str = "lowest") -> PointRecord:
    """Run the full pipeline at one parameter point.

    Unstable or marginal points (max Re eigenvalue >= -1e-9) return NaN
    for every requested measure.  A Lyapunov failure at a nominally stable
    point is flagged as an anomaly instead of raising.
    """
    ss = solve_steady_state(params, branch)
    m = build_drift(params, ss)
    margin = max_real_eigenvalue(m)
    stable = margin < 0.0
    nan_values = dict.fromkeys(measures, float("nan"))
    if margin >= -MARGINAL_TOL:
        return PointRecord((), stable, margin, ss.n_roots, nan_values)
    d = build_diffusion(params, field)
    try:
        v = solve_lyapunov(m, d, check_stable=False)
    except NumericalError:
        return PointRecord((), stable, margin, ss.n_roots, nan_values, anomaly=True)
    ctx = _EvalContext(params, field, v, d, margin)
    values = {name: float(MEASURES[name](ctx)) for name in measures}
    return PointRecord((), stable, margin, ss.n_roots, values)


def _eval_at(coords, spec: SweepSpec, branch: str) -> PointRecord:
    params, field = spec.params, spec.field
    for ax, value in zip(spec.axes, coords):
        params, field = apply_axis_value(params, field, ax.name, float(value))
    rec = evaluate_point(params, field, spec.measures, branch)
    return replace(rec, coords=tuple(float(v) for v in coords))


def run_sweep(spec: SweepSpec, jobs: int = 1, branch: str = "lowest") -> SweepResult:
    """Evaluate the whole grid, row-major in axis declaration order.

    The result is identical for any worker count: points are independent
    and reassembled in order.
    """
    grids = tuple(ax.values() for ax in spec.axes)
    if len(grids) == 1:
        coords = [(v,) for v in grids[0]]
    else:
        coords = [(u, v) for u in grids[0] for v in grids[1]]
    worker = partial(_eval_at, spec=spec, branch=branch)
    if jobs <= 1:
        records = [worker(c) for c in coords]
    else:
        chunk = max(1, len(coords) // (jobs * 8))
        with Pool(processes=jobs) as pool:
            records = pool.map(worker, coords, chunksize=chunk)
    return SweepResult(spec=spec, axis_values=grids, records=tuple(records))


def theta_reflection_probe(result: SweepResult) -> float | None:
    """Reflection diagnostics for sweeps with a full-turn theta axis.

    Asserts the exact diffusion-matrix identity D(2pi - theta) =
    T D(theta) T with T = diag(1,-1,...) at every theta grid value, then
    returns the measured max |EN(theta) - EN(2pi - theta)| over reflected
    grid pairs (reported, never asserted: the drift side of the pipeline
    has no such mirror symmetry to force it).  Returns None when the sweep
    has no theta axis spanning [0, 2pi] or no entanglement measure.
    """
    t_dim = next((i for i, ax in enumerate(result.spec.axes) if ax.name == "theta"), None)
    if t_dim is None:
        return None
    ax = result.spec.axes[t_dim]
    if not (ax.lo == 0.0 and abs(ax.hi - 2.0 * math.pi) < 1e-12):
        return None
    sign_flip = np.diag([1.0, -1.0, 1.0, -1.0, 1.0, -1.0])
    thetas = result.axis_values[t_dim]
    for t in thetas:
        d_t = build_diffusion(result.spec.params, result.spec.field.replace(theta=float(t)))
        d_ref = build_diffusion(result.spec.params,
                                result.spec.field.replace(theta=2.0 * math.pi - float(t)))
        if not np.allclose(d_ref, sign_flip @ d_t @ sign_flip, rtol=0.0,
                           atol=1e-13 * max(1.0, np.abs(d_t).max())):
            raise NumericalError(f"diffusion reflection identity violated at theta={t}")
    en_name = next((n for n in result.spec.measures if n.startswith("EN_")), None)
    if en_name is None:
        return None
    en = result.column(en_name)
    shape = tuple(len(g) for g in result.axis_values)
    en = en.reshape(shape)
    en = np.moveaxis(en, t_dim, 0)
    deviation = 0.0
    n = len(thetas)
    for i in range(n):
        # reflected partner on the grid, if any
        want = 2.0 * math.pi - thetas[i]
        j = int(np.argmin(np.abs(thetas - want)))
        if abs(thetas[j] - want) > 1e-9:
            continue
        diff = np.abs(en[i] - en[j])
        finite = diff[np.isfinite(diff)]
        if finite.size:
            deviation = max(deviation, float(finite.max()))
    return deviation


_FIG2_BASELINE = dict(kappa1=0.2, kappa2=0.2, gamma_m=1e-5, g=5e-5, J=0.5,
                      Delta1=1.8, Delta2=1.8, E=3.0e5, n_a2=0.0, m_th=0.0)


def _spec(params_overrides, field, axes, measures) -> SweepSpec:
    base = dict(_FIG2_BASELINE)
    base.update(params_overrides)
    return SweepSpec(params=SystemParams(**base), field=field,
                     axes=tuple(axes), measures=tuple(measures))


def _presets() -> dict:
    pi = math.pi
    vac = SqueezedField(0.0, 0.0)
    return {
        # entanglement / steering maps vs (Delta, E) at J = 0.5
        "fig2a": lambda: _spec({}, vac,
                               [Axis("Delta", 0.0, 3.0, 101), Axis("E", 0.0, 1e6, 101)],
                               ["EN_a1_b"]),
        "fig2b": lambda: _spec({}, vac,
                               [Axis("Delta", 0.0, 3.0, 101), Axis("E", 0.0, 1e6, 101)],
                               ["G_b_to_a1"]),
        # same maps vs (J, E) at Delta = 1.8
        "fig2c": lambda: _spec({}, vac,
                               [Axis("J", 0.0, 1.5, 101), Axis("E", 0.0, 1e6, 101)],
                               ["EN_a1_b"]),
        "fig2d": lambda: _spec({}, vac,
                               [Axis("J", 0.0, 1.5, 101), Axis("E", 0.0, 1e6, 101)],
                               ["G_b_to_a1"]),
        # E lines for a few squeezing strengths at theta = 0
        "fig3a": lambda: _spec({}, vac,
                               [Axis("r", 0.0, 0.2, 3), Axis("E", 0.0, 8e5, 201)],
                               ["EN_a1_b", "G_b_to_a1"]),
        # diffusion elements vs r
        "fig3b": lambda: _spec({}, vac,
                               [Axis("r", 0.0, 1.0, 201)],
                               ["D11", "D22"]),
        # a1 quadrature variances vs r, for theta = 0 and pi
        "fig4": lambda: _spec({}, vac,
                              [Axis("theta", 0.0, pi, 2), Axis("r", 0.0, 0.3, 201)],
                              ["var_x_a1", "var_y_a1"]),
        # E lines for several phases at r = 0.1 (7-point theta grid covers
        # 0, pi/2, 2pi/3, pi)
        "fig5a": lambda: _spec({}, SqueezedField(0.1, 0.0),
                               [Axis("theta", 0.0, pi, 7), Axis("E", 0.0, 8e5, 201)],
                               ["EN_a1_b"]),
        # (r, theta) map at E = 3.0e5
        "fig5b": lambda: _spec({}, vac,
                               [Axis("r", 0.0, 0.3, 101), Axis("theta", 0.0, 2 * pi, 101)],
                               ["EN_a1_b"]),
        # (theta, E) map at r = 0.1
        "fig5c": lambda: _spec({}, SqueezedField(0.1, 0.0),
                               [Axis("theta", 0.0, 2 * pi, 101), Axis("E", 0.0, 8e5, 101)],
                               ["EN_a1_b"]),
        # decay-rate ratio vs thermal phonons, squeezed input r=0.1 theta=pi
        "fig6a": lambda: _spec({}, SqueezedField(0.1, pi),
                               [Axis("kappa2/kappa1", 0.2, 3.0, 101),
                                Axis("m_th", 0.0, 200.0, 101)],
                               ["EN_a1_b"]),
        # detuning ratio vs coupling g at J = 1.0
        "fig6b": lambda: _spec({"J": 1.0}, SqueezedField(0.1, pi),
                               [Axis("Delta2/Delta1", 0.5, 1.5, 101),
                                Axis("g", 1e-5, 1e-4, 101)],
                               ["EN_a1_b"]),
        # weak-g configuration probing the a1-a2 pair
        "a1a2": lambda: _spec({"g": 1e-7, "kappa1": 0.1, "kappa2": 0.1, "J": 0.6}, vac,
                              [Axis("Delta", 0.0, 3.0, 101), Axis("E", 0.0, 2e6, 101)],
                              ["EN_a1_a2", "G_a1_to_a2", "G_a2_to_a1"]),
    }


PRESET_NAMES = tuple(sorted(_presets()))


def preset(name: str) -> SweepSpec:
    """Named sweep reproducing one of the reference figures."""
    builders = _presets()
    if name not in builders:
        raise ValidationError(
            f"unknown preset {name!r}; valid names: {', '.join(PRESET_NAMES)}")
    return builders[name]()
