"""Ideals, characters and normal subgroups of AF algebras given by Bratteli diagrams."""

from .analysis import (
    characters,
    enumerate_ideals,
    is_perfect,
    largest_perfect,
    normal_subgroups_of_VA,
    perfectness_check,
    simplicity_report,
)
from .diagram import BratteliDiagram, VertexId, unroll, validate_diagram
from .ideals import IdealSet, LevelSet, closure, is_ideal_set, quotient_diagram, restrict_diagram
from .io import parse_diagram, read_diagram, serialize_diagram, to_dot

__version__ = "0.1.0"

__all__ = [
    "BratteliDiagram", "IdealSet", "LevelSet", "VertexId", "characters", "closure",
    "enumerate_ideals", "is_ideal_set", "is_perfect", "largest_perfect", "normal_subgroups_of_VA",
    "parse_diagram", "perfectness_check", "quotient_diagram", "read_diagram", "restrict_diagram",
    "serialize_diagram", "simplicity_report", "to_dot", "unroll", "validate_diagram",
]
