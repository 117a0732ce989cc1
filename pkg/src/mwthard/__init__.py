"""Exact tools for minimum-weight triangulation gadgets and the reduction built from them."""

from .arithmetic import IntInterval, ScaledInt, edge_length, interval_isqrt, parse_fixed_decimal
from .geometry import Point, Polygon, validate_simple_polygon
from .polygon_mwt import EdgeConstraint, MwtResult, brute_force_mwt, polygon_mwt

__version__ = "0.1.0"

__all__ = [
    "EdgeConstraint", "IntInterval", "MwtResult", "Point", "Polygon", "ScaledInt",
    "brute_force_mwt", "edge_length", "interval_isqrt", "parse_fixed_decimal",
    "polygon_mwt", "validate_simple_polygon",
]
