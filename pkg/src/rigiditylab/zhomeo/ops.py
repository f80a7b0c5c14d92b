"""Function-style entry points over any :class:`LineElement` backend."""

from __future__ import annotations

from fractions import Fraction

from .base import (
    Classification,
    FixedPointSet,
    LineElement,
    Number,
    Orientation,
    TranslationInterval,
)
from .pl import PLZMap


def evaluate(f: LineElement, x: Number) -> Number:
    return f.evaluate(x)


def compose(f: LineElement, g: LineElement) -> LineElement:
    """``f ∘ g``: apply ``g`` first."""
    return f.compose(g)


def invert(f: LineElement) -> LineElement:
    return f.inverse()


def fixed_points(f: LineElement) -> FixedPointSet:
    return f.fixed_points()


def classify(f: LineElement) -> Classification:
    if f.orientation is Orientation.REVERSING:
        return Classification.ORIENTATION_REVERSING
    if f.is_identity():
        return Classification.IDENTITY
    fps = f.fixed_points()
    if not fps:
        return Classification.FIXED_POINT_FREE
    if fps.is_hyperbolic_like and not fps.degenerate:
        return Classification.HYPERBOLIC_LIKE
    return Classification.DEGENERATE


def is_hyperbolic_like(f: LineElement) -> bool:
    return classify(f) is Classification.HYPERBOLIC_LIKE


def translation_number(f: LineElement, n_iterations: int = 16) -> TranslationInterval:
    """An interval containing the translation number of ``f``.

    Uses ``|f^n(0) - n rho| < 1``. A fixed point forces the exact answer 0.
    For PL maps the result is intersected with the exact displacement range,
    which always contains the translation number.
    """
    if f.orientation is not Orientation.PRESERVING:
        raise ValueError("translation number needs an orientation-preserving map")
    if n_iterations < 1:
        raise ValueError("n_iterations must be positive")
    if f.has_fixed_points():
        zero = Fraction(0) if isinstance(f, PLZMap) else 0.0
        return TranslationInterval(zero, zero, closed=True)
    x = Fraction(0) if isinstance(f, PLZMap) else 0.0
    for _ in range(n_iterations):
        x = f.evaluate(x)
    lo, hi = (x - 1) / n_iterations, (x + 1) / n_iterations
    if isinstance(f, PLZMap):
        dlo, dhi = f.displacement_range()
        return TranslationInterval(max(lo, dlo), min(hi, dhi), closed=True)
    return TranslationInterval(lo, hi, closed=False)
