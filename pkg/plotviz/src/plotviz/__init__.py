"""Manifest-driven rendering of 8-panel comparison figures from oqsim
``compare`` output CSVs."""

from .render import PanelData, SchemaError, build_figure, load_panel_csv, render_compare

__all__ = [
    "PanelData",
    "SchemaError",
    "build_figure",
    "load_panel_csv",
    "render_compare",
]
