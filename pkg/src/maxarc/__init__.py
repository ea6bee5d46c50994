"""Denniston, Mathon and Singer maximal arcs in PG(2, 2^h)."""

from .arcs import MathonArc, arc_points, denniston_from_subgroup, verify_maximal
from .ff import FieldElem, GF2m
from .geom import Collineation, Conic
from .singer import SingerKind, build_singer_arc, lift_to_extension

__all__ = [
    "Collineation",
    "Conic",
    "FieldElem",
    "GF2m",
    "MathonArc",
    "SingerKind",
    "arc_points",
    "build_singer_arc",
    "denniston_from_subgroup",
    "lift_to_extension",
    "verify_maximal",
]
