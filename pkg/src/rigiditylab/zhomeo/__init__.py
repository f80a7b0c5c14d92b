"""Homeomorphisms of the line commuting with integer translation."""

from .base import (
    Classification,
    FixedPoint,
    FixedPointSet,
    Kind,
    LineElement,
    Orientation,
    TranslationInterval,
    circle_distance,
    frac_part,
)
from .composite import Conjugated, FormalWord
from .moebius import MoebiusLift
from .ops import (
    classify,
    compose,
    evaluate,
    fixed_points,
    invert,
    is_hyperbolic_like,
    translation_number,
)
from .pl import PLZMap

__all__ = [
    "Classification", "Conjugated", "FixedPoint", "FixedPointSet", "FormalWord",
    "Kind", "LineElement", "MoebiusLift", "Orientation", "PLZMap",
    "TranslationInterval", "circle_distance", "classify", "compose", "evaluate",
    "fixed_points", "frac_part", "invert", "is_hyperbolic_like", "translation_number",
]
