"""Figure rendering for dbspsim sweep results."""

from .figures import (
    FAMILY_BY_DISTANCE,
    KINDS,
    PALETTE,
    REQUIRED_COLUMNS,
    FigureSpec,
    SchemaError,
    load_results,
    pareto_series,
    render,
    scurve_order,
    scurve_series,
)

__all__ = [
    "FAMILY_BY_DISTANCE",
    "KINDS",
    "PALETTE",
    "REQUIRED_COLUMNS",
    "FigureSpec",
    "SchemaError",
    "load_results",
    "pareto_series",
    "render",
    "scurve_order",
    "scurve_series",
]
