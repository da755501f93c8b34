"""Figure rendering for contirl harness CSV output."""

from .render import FigureJob, SchemaError, load_rows, render

__all__ = ["FigureJob", "SchemaError", "load_rows", "render"]
