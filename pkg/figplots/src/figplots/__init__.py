"""Batch plotting for omsteer sweep CSVs."""

from .render import ColumnError, PlotJob, RenderInfo, read_sweep_csv, render

__version__ = "0.1.0"

__all__ = ["ColumnError", "PlotJob", "RenderInfo", "read_sweep_csv", "render"]
