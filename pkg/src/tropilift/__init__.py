"""Exact computations with metric graphs, harmonic morphisms and their lifts."""
from .errors import (NotHarmonicError, ParseError, RefusedComputation, TropiliftError,
                     ValidationError)
from .graph import INF, Divisor, Edge, MetricGraph, Point, banana, circle, path, point_graph
from .harmonic import Contracted, Morphism

__version__ = "0.1.0"

__all__ = [
    "INF", "Divisor", "Edge", "MetricGraph", "Point", "banana", "circle", "path",
    "point_graph", "Contracted", "Morphism", "TropiliftError", "ValidationError",
    "ParseError", "NotHarmonicError", "RefusedComputation",
]
