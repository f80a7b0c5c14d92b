"""Backends built from other elements.

``Conjugated(h, inner)`` is ``h ∘ inner ∘ h^{-1}`` for a PL coordinate change
``h``. It keeps Möbius models closed under PL conjugation: composing two
elements conjugated by the same ``h`` composes the inner elements, and fixed
points are read off as ``h(Fix(inner))``.

``FormalWord`` is a word over generator names that only becomes a map once a
representation is bound to it.
"""

from __future__ import annotations

import math

from ..errors import IncompatibleBackendError, UnboundWordError
from .base import FixedPoint, FixedPointSet, LineElement, Number, Orientation
from .moebius import MoebiusLift
from .pl import PLZMap


def _is_deck_translation(e: LineElement) -> bool:
    return isinstance(e, MoebiusLift) and e.is_projective_identity()


class Conjugated(LineElement):
    backend = "conjugated"
    __slots__ = ("conjugator", "inner", "_conj_inv", "_fps")

    def __new__(cls, conjugator: PLZMap, inner: LineElement):
        if isinstance(inner, PLZMap):
            return inner.conjugate_by(conjugator)
        if isinstance(inner, Conjugated):
            return Conjugated(conjugator.compose(inner.conjugator), inner.inner)
        if conjugator.is_identity():
            return inner
        if _is_deck_translation(inner):
            return MoebiusLift.translation(inner.deck * conjugator.orientation.sign)
        return cls._make(conjugator, conjugator.inverse(), inner)

    @classmethod
    def _make(cls, conjugator: PLZMap, conj_inv: PLZMap, inner: LineElement) -> "Conjugated":
        self = object.__new__(cls)
        object.__setattr__(self, "conjugator", conjugator)
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "_conj_inv", conj_inv)
        object.__setattr__(self, "_fps", None)
        return self

    def _with_inner(self, inner: LineElement) -> LineElement:
        """Same conjugator, new inner element, reusing the cached inverse."""
        if isinstance(inner, (PLZMap, Conjugated)) or _is_deck_translation(inner):
            return Conjugated(self.conjugator, inner)
        return Conjugated._make(self.conjugator, self._conj_inv, inner)

    def __setattr__(self, name, value):
        raise AttributeError("Conjugated is immutable")

    def __repr__(self) -> str:
        return f"Conjugated({self.conjugator!r}, {self.inner!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Conjugated):
            return NotImplemented
        return self.conjugator == other.conjugator and self.inner == other.inner

    def __hash__(self) -> int:
        return hash((self.conjugator, self.inner))

    @property
    def orientation(self) -> Orientation:
        return self.inner.orientation

    def evaluate(self, x: Number) -> Number:
        return self.conjugator.evaluate(self.inner.evaluate(self._conj_inv.evaluate(x)))

    def is_identity(self) -> bool:
        return self.inner.is_identity()

    def identity_like(self) -> LineElement:
        return self.inner.identity_like()

    def compose(self, other: LineElement) -> LineElement:
        if isinstance(other, Conjugated) and (other.conjugator is self.conjugator
                                              or other.conjugator == self.conjugator):
            return self._with_inner(self.inner.compose(other.inner))
        return compose_mixed(self, other)

    def inverse(self) -> LineElement:
        return self._with_inner(self.inner.inverse())

    def fixed_points(self) -> FixedPointSet:
        if self._fps is None:
            object.__setattr__(self, "_fps", self._solve_fixed_points())
        return self._fps

    def _solve_fixed_points(self) -> FixedPointSet:
        inner = self.inner.fixed_points()
        if inner.whole_line:
            return inner
        lip = float(self.conjugator.lipschitz())
        pts = []
        for p in inner:
            loc = self.conjugator.evaluate(p.location)
            if self.orientation is Orientation.PRESERVING:
                loc = loc - math.floor(loc)
            pts.append(FixedPoint(loc, p.kind, p.radius * lip))
        pts.sort(key=lambda p: p.location)
        return FixedPointSet(tuple(pts))


class FormalWord(LineElement):
    """A word that is resolved against ``rep`` on demand."""

    backend = "word"
    __slots__ = ("word", "rep")

    def __init__(self, word, rep=None):
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("FormalWord is immutable")

    def __repr__(self) -> str:
        return f"FormalWord({str(self.word)!r})"

    def bind(self, rep) -> "FormalWord":
        return FormalWord(self.word, rep)

    def resolve(self) -> LineElement:
        if self.rep is None:
            raise UnboundWordError(f"word {self.word} has no representation bound")
        return self.rep.eval_word(self.word)

    @property
    def orientation(self) -> Orientation:
        return self.resolve().orientation

    def evaluate(self, x: Number) -> Number:
        return self.resolve().evaluate(x)

    def compose(self, other: LineElement) -> LineElement:
        if isinstance(other, FormalWord) and other.rep is self.rep:
            return FormalWord(self.word * other.word, self.rep)
        raise IncompatibleBackendError("formal words compose only with words over the same representation")

    def inverse(self) -> "FormalWord":
        return FormalWord(self.word.inverse(), self.rep)

    def fixed_points(self) -> FixedPointSet:
        return self.resolve().fixed_points()

    def is_identity(self) -> bool:
        return self.resolve().is_identity()

    def identity_like(self) -> "FormalWord":
        from ..words import Word
        return FormalWord(Word(()), self.rep)


def compose_mixed(f: LineElement, g: LineElement) -> LineElement:
    """f ∘ g across backends, for the combinations that stay representable."""
    if isinstance(g, PLZMap) and g.is_identity():
        return f
    if isinstance(f, PLZMap) and f.is_identity():
        return g
    # c^{-1} T_k c = T_{±k} according to the orientation of c
    if _is_deck_translation(g):
        if isinstance(f, Conjugated):
            shift = MoebiusLift.translation(g.deck * f.conjugator.orientation.sign)
            return f._with_inner(f.inner.compose(shift))
        if isinstance(f, PLZMap):
            return f.compose(PLZMap.translation(g.deck))
    if _is_deck_translation(f):
        if isinstance(g, Conjugated):
            shift = MoebiusLift.translation(f.deck * g.conjugator.orientation.sign)
            return g._with_inner(shift.compose(g.inner))
        if isinstance(g, PLZMap):
            return PLZMap.translation(f.deck).compose(g)
    raise IncompatibleBackendError(
        f"cannot compose {f.backend} with {g.backend} backends")
