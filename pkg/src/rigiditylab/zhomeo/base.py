"""Core value types for homeomorphisms of the line commuting with T_1."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

Number = Union[Fraction, float, int]


class Orientation(str, enum.Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"

    @property
    def sign(self) -> int:
        return 1 if self is Orientation.PRESERVING else -1

    @classmethod
    def from_sign(cls, sign: int) -> "Orientation":
        return cls.PRESERVING if sign > 0 else cls.REVERSING

    def __mul__(self, other: "Orientation") -> "Orientation":
        return Orientation.from_sign(self.sign * other.sign)


class Kind(str, enum.Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    DEGENERATE = "degenerate"

    def swapped(self) -> "Kind":
        if self is Kind.ATTRACTING:
            return Kind.REPELLING
        if self is Kind.REPELLING:
            return Kind.ATTRACTING
        return self


class Classification(str, enum.Enum):
    IDENTITY = "identity"
    FIXED_POINT_FREE = "fixed_point_free"
    HYPERBOLIC_LIKE = "hyperbolic_like"
    DEGENERATE = "degenerate"
    ORIENTATION_REVERSING = "orientation_reversing"


@dataclass(frozen=True)
class FixedPoint:
    location: Number
    kind: Kind
    # 0 for exact locations; otherwise the certified error bound
    radius: float = 0.0

    def to_json(self) -> dict:
        loc = self.location
        if isinstance(loc, Fraction):
            loc_json = [str(loc.numerator), str(loc.denominator)]
        else:
            loc_json = float(loc)
        return {"location": loc_json, "kind": self.kind.value, "radius": self.radius}


@dataclass(frozen=True)
class FixedPointSet:
    """Fixed points in the fundamental domain [0, 1).

    For an orientation-reversing element there is a single fixed point on
    the whole line and ``points`` holds its actual location, which need not
    lie in [0, 1).
    """

    points: Tuple[FixedPoint, ...] = ()
    whole_line: bool = False

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __bool__(self) -> bool:
        return self.whole_line or bool(self.points)

    @property
    def attracting(self) -> Tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.kind is Kind.ATTRACTING)

    @property
    def repelling(self) -> Tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.kind is Kind.REPELLING)

    @property
    def degenerate(self) -> Tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.kind is Kind.DEGENERATE)

    @property
    def is_hyperbolic_like(self) -> bool:
        return (not self.whole_line and len(self.points) == 2
                and len(self.attracting) == 1 and len(self.repelling) == 1)

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points],
                "whole_line": self.whole_line}


@dataclass(frozen=True)
class TranslationInterval:
    """Interval known to contain the translation number.

    ``closed`` says whether the endpoints belong to the interval.
    """

    lo: Number
    hi: Number
    closed: bool = True

    def contains_zero(self) -> bool:
        if self.closed:
            return self.lo <= 0 <= self.hi
        return self.lo < 0 < self.hi

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return [str(v.numerator), str(v.denominator)]
            return float(v)
        return {"lo": enc(self.lo), "hi": enc(self.hi), "closed": self.closed}


def frac_part(x: Number) -> Number:
    """x - floor(x), exact for Fractions."""
    return x - math.floor(x)


def circle_distance(x: Number, y: Number) -> float:
    """Distance between x and y in R/Z."""
    d = float(frac_part(x - y))
    return min(d, 1.0 - d)


class LineElement:
    """Common interface for every element backend.

    Subclasses are immutable values. ``compose(g)`` means ``self ∘ g``.
    """

    backend: str = "abstract"

    @property
    def orientation(self) -> Orientation:
        raise NotImplementedError

    def __call__(self, x: Number) -> Number:
        return self.evaluate(x)

    def evaluate(self, x: Number) -> Number:
        raise NotImplementedError

    def compose(self, other: "LineElement") -> "LineElement":
        raise NotImplementedError

    def inverse(self) -> "LineElement":
        raise NotImplementedError

    def fixed_points(self) -> FixedPointSet:
        raise NotImplementedError

    def is_identity(self) -> bool:
        raise NotImplementedError

    def has_fixed_points(self) -> bool:
        return bool(self.fixed_points())

    def power(self, n: int) -> "LineElement":
        """Binary powering; ``power(0)`` is the identity of the same backend."""
        if n < 0:
            return self.inverse().power(-n)
        result = self.identity_like()
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            n >>= 1
            if n:
                base = base.compose(base)
        return result

    def identity_like(self) -> "LineElement":
        raise NotImplementedError
