"""Offline figure rendering for cesaro-lab experiment CSVs."""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, PlotSpec, SchemaError, build_figure, main, read_table, render
