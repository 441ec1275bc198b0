"""Render omsteer sweep CSVs as line or filled-contour figures.

Consumes exactly the sweep CSV schema: axis columns first, then
`stable,max_re_eig,n_roots`, then one column per measure; unstable or
marginal cells hold the literal `nan`.

Rendering defaults (chosen for print legibility):
  * filled contours: viridis, 21 levels, 150 dpi, 6.4x4.8 in;
  * masked (nan) cells: flat dim gray, with the stability boundary
    (stable = 0.5 contour) overlaid as a white line;
  * reference contour: black dashed line at the requested level;
  * line plots: one curve per measure and per group value, default
    matplotlib color cycle, legend on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

MASK_COLOR = "dimgray"
CONTOUR_LEVELS = 21
DPI = 150

_FIXED_COLUMNS = ("stable", "max_re_eig", "n_roots")


class ColumnError(KeyError):
    """A referenced column is missing from the CSV."""

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class PlotJob:
    """One figure: input CSV, kind, axis/measure columns, output path.

    kind "contour" needs two axis columns and one measure; kind "line"
    needs one x-axis column, one or more comma-separated measures, and
    groups curves by `group` (default: the CSV's other axis column, when
    present).  `level` draws a dashed reference contour (contour only).
    """

    csv_path: str
    kind: str
    axes: tuple
    measure: str
    out_path: str
    level: float | None = None
    group: str | None = None


@dataclass(frozen=True)
class RenderInfo:
    out_path: str
    n_rows: int
    masked_points: int
    n_curves: int
    reference_contour_segments: int
    boundary_segments: int
    empty_stable_warning: bool


def read_sweep_csv(path: str):
    """Parse a sweep CSV into (axis column names, {column: float array})."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if "stable" not in header:
        raise ColumnError(f"column 'stable' not in {path}; not a sweep CSV")
    axis_names = header[: header.index("stable")]
    data = {name: np.array([float(row[i]) for row in rows[1:]])
            for i, name in enumerate(header)}
    return axis_names, data


def _require(columns, data, path):
    for name in columns:
        if name not in data:
            raise ColumnError(f"column {name!r} not in {path} "
                              f"(has: {', '.join(data)})")


def _contour_paths(contour_set) -> int:
    return sum(1 for p in contour_set.get_paths() if len(p.vertices))


def render(job: PlotJob) -> RenderInfo:
    if job.kind == "contour":
        return _render_contour(job)
    if job.kind == "line":
        return _render_line(job)
    raise ValueError(f"unknown figure kind {job.kind!r}")


def _render_contour(job: PlotJob) -> RenderInfo:
    axis_names, data = read_sweep_csv(job.csv_path)
    if len(job.axes) != 2:
        raise ValueError("contour jobs need exactly two axis columns")
    if "," in job.measure:
        raise ValueError("contour jobs take a single measure column")
    _require(list(job.axes) + [job.measure], data, job.csv_path)
    x_name, y_name = job.axes
    x = np.unique(data[x_name])
    y = np.unique(data[y_name])
    n_rows = len(data[job.measure])
    if len(x) * len(y) != n_rows:
        raise ValueError(f"{job.csv_path}: rows ({n_rows}) do not form a "
                         f"{len(x)}x{len(y)} grid over ({x_name}, {y_name})")
    # CSV rows are row-major with the first axis column outermost
    outer_first = axis_names.index(x_name) < axis_names.index(y_name)
    z = data[job.measure].reshape((len(x), len(y)) if outer_first
                                  else (len(y), len(x)))
    stable = data["stable"].reshape(z.shape)
    if not outer_first:
        z, stable = z.T, stable.T
    masked = np.ma.masked_invalid(z)
    n_masked = int(masked.mask.sum()) if masked.mask is not np.ma.nomask else 0

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.set_facecolor(MASK_COLOR)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad(MASK_COLOR)
    warn_empty = bool(np.all(masked.mask)) if masked.mask is not np.ma.nomask else False
    boundary_segments = 0
    ref_segments = 0
    if warn_empty:
        ax.pcolormesh(x, y, masked.T, cmap=cmap, shading="nearest")
        ax.text(0.5, 0.5, "no stable points in this sweep",
                transform=ax.transAxes, ha="center", va="center",
                color="white", fontsize=12)
    else:
        mesh = ax.pcolormesh(x, y, masked.T, cmap=cmap, shading="nearest")
        fig.colorbar(mesh, ax=ax, label=job.measure)
        if stable.min() < 0.5 < stable.max():
            cs = ax.contour(x, y, stable.T, levels=[0.5], colors="white",
                            linewidths=1.0)
            boundary_segments = _contour_paths(cs)
        if job.level is not None:
            ref = ax.contour(x, y, np.where(np.isfinite(z), z, -np.inf).T,
                             levels=[job.level], colors="black",
                             linestyles="dashed", linewidths=1.2)
            ref_segments = _contour_paths(ref)
    ax.set_xlabel(x_name)
    ax.set_ylabel(y_name)
    ax.set_title(job.measure)
    fig.tight_layout()
    fig.savefig(job.out_path, dpi=DPI)
    plt.close(fig)
    return RenderInfo(out_path=job.out_path, n_rows=n_rows,
                      masked_points=n_masked, n_curves=0,
                      reference_contour_segments=ref_segments,
                      boundary_segments=boundary_segments,
                      empty_stable_warning=warn_empty)


def _render_line(job: PlotJob) -> RenderInfo:
    axis_names, data = read_sweep_csv(job.csv_path)
    if len(job.axes) != 1:
        raise ValueError("line jobs need exactly one x-axis column")
    x_name = job.axes[0]
    measures = [m.strip() for m in job.measure.split(",") if m.strip()]
    group = job.group
    if group is None:
        others = [name for name in axis_names if name != x_name]
        group = others[0] if others else None
    needed = [x_name] + measures + ([group] if group else [])
    _require(needed, data, job.csv_path)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    n_curves = 0
    n_masked = 0
    finite_any = False
    if group:
        for value in np.unique(data[group]):
            sel = data[group] == value
            for m in measures:
                ys = data[m][sel]
                n_masked += int(np.sum(~np.isfinite(ys)))
                finite_any = finite_any or bool(np.any(np.isfinite(ys)))
                label = f"{m}, {group}={value:g}" if len(measures) > 1 \
                    else f"{group}={value:g}"
                ax.plot(data[x_name][sel], ys, label=label)
                n_curves += 1
    else:
        for m in measures:
            ys = data[m]
            n_masked += int(np.sum(~np.isfinite(ys)))
            finite_any = finite_any or bool(np.any(np.isfinite(ys)))
            ax.plot(data[x_name], ys, label=m)
            n_curves += 1
    warn_empty = not finite_any
    if warn_empty:
        ax.text(0.5, 0.5, "no stable points in this sweep",
                transform=ax.transAxes, ha="center", va="center", fontsize=12)
    if n_curves > 1 or group or len(measures) > 1:
        ax.legend()
    ax.set_xlabel(x_name)
    ax.set_ylabel(", ".join(measures))
    fig.tight_layout()
    fig.savefig(job.out_path, dpi=DPI)
    plt.close(fig)
    return RenderInfo(out_path=job.out_path, n_rows=len(data[x_name]),
                      masked_points=n_masked, n_curves=n_curves,
                      reference_contour_segments=0, boundary_segments=0,
                      empty_stable_warning=warn_empty)
