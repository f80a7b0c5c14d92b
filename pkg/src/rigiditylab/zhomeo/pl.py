"""Exact piecewise-linear maps of the line commuting (or anti-commuting) with T_1.

A map is stored by its values on a finite set of nodes in [0, 1); between
consecutive nodes it is affine, and the segment after the last node ends at
``(1, y_0 ± 1)``. The canonical form always has a node at 0 and no other
node where the slope does not change, so equal maps have equal breakpoints.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from ..errors import ValidationError
from .base import (
    FixedPoint,
    FixedPointSet,
    Kind,
    LineElement,
    Number,
    Orientation,
    TranslationInterval,
)

Point = Tuple[Fraction, Fraction]


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


class PLZMap(LineElement):
    backend = "pl"
    __slots__ = ("_xs", "_ys", "_orientation", "_hash", "_floats", "_lip", "_fps")

    def __init__(self, breakpoints: Iterable[Tuple[Number, Number]],
                 orientation: Orientation | str = Orientation.PRESERVING):
        orientation = Orientation(orientation)
        pts = [(_as_fraction(x), _as_fraction(y)) for x, y in breakpoints]
        if not pts:
            raise ValidationError("a PL map needs at least one breakpoint")
        xs, ys = _canonical(pts, orientation)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)
        object.__setattr__(self, "_orientation", orientation)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_floats", None)
        object.__setattr__(self, "_lip", None)
        object.__setattr__(self, "_fps", None)

    def __setattr__(self, name, value):
        raise AttributeError("PLZMap is immutable")

    # construction helpers -------------------------------------------------

    @classmethod
    def identity(cls) -> "PLZMap":
        return cls([(0, 0)])

    @classmethod
    def translation(cls, t: Number) -> "PLZMap":
        return cls([(0, _as_fraction(t))])

    @classmethod
    def reflection(cls, c: Number = 0) -> "PLZMap":
        """x -> c - x, the simplest orientation-reversing element."""
        return cls([(0, _as_fraction(c))], Orientation.REVERSING)

    # value semantics ------------------------------------------------------

    @property
    def orientation(self) -> Orientation:
        return self._orientation

    @property
    def breakpoints(self) -> Tuple[Point, ...]:
        return tuple(zip(self._xs, self._ys))

    def __len__(self) -> int:
        return len(self._xs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLZMap):
            return NotImplemented
        return (self._orientation is other._orientation and self._xs == other._xs
                and self._ys == other._ys)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self._orientation, self._xs, self._ys))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        pts = ", ".join(f"({x}, {y})" for x, y in self.breakpoints)
        return f"PLZMap([{pts}], {self._orientation.value!r})"

    def is_identity(self) -> bool:
        return (self._orientation is Orientation.PRESERVING and len(self._xs) == 1
                and self._ys[0] == 0)

    def identity_like(self) -> "PLZMap":
        return PLZMap.identity()

    def is_translation(self) -> bool:
        return self._orientation is Orientation.PRESERVING and len(self._xs) == 1

    # evaluation -----------------------------------------------------------

    def evaluate(self, x: Number) -> Number:
        if isinstance(x, float):
            return self._evaluate_float(x)
        n = math.floor(x)
        f = x - n
        xs, ys = self._xs, self._ys
        i = bisect_right(xs, f) - 1
        x0, y0 = xs[i], ys[i]
        if i + 1 < len(xs):
            x1, y1 = xs[i + 1], ys[i + 1]
        else:
            x1, y1 = 1, ys[0] + self._orientation.sign
        if f == x0:
            val = y0
        else:
            val = y0 + (y1 - y0) * (f - x0) / (x1 - x0)
        return val + self._orientation.sign * n

    def _evaluate_float(self, x: float) -> float:
        fl = self._floats
        if fl is None:
            xs = [float(v) for v in self._xs] + [1.0]
            ys = [float(v) for v in self._ys] + [float(self._ys[0] + self._orientation.sign)]
            fl = (xs, ys)
            object.__setattr__(self, "_floats", fl)
        xs, ys = fl
        n = math.floor(x)
        f = x - n
        i = bisect_right(xs, f) - 1
        if i >= len(xs) - 1:
            i = len(xs) - 2
        x0, x1 = xs[i], xs[i + 1]
        val = ys[i] + (ys[i + 1] - ys[i]) * (f - x0) / (x1 - x0)
        return val + self._orientation.sign * n

    def segments(self) -> List[Tuple[Point, Point]]:
        """Affine pieces over [0, 1], closing with the periodic wrap segment."""
        xs, ys = self._xs, self._ys
        k = len(xs)
        out = []
        for i in range(k):
            if i + 1 < k:
                nxt = (xs[i + 1], ys[i + 1])
            else:
                nxt = (Fraction(1), ys[0] + self._orientation.sign)
            out.append(((xs[i], ys[i]), nxt))
        return out

    def slopes(self) -> List[Fraction]:
        return [(b[1] - a[1]) / (b[0] - a[0]) for a, b in self.segments()]

    def lipschitz(self) -> Fraction:
        if self._lip is None:
            object.__setattr__(self, "_lip", max(abs(s) for s in self.slopes()))
        return self._lip

    # group operations -----------------------------------------------------

    def inverse(self) -> "PLZMap":
        sign = self._orientation.sign
        pts = []
        for x, y in self.breakpoints:
            n = math.floor(y)
            # f(x) = y = frac + n, so f^{-1}(frac) = x - sign*n
            pts.append((y - n, x - sign * n))
        return PLZMap(pts, self._orientation)

    def compose(self, other: LineElement) -> LineElement:
        if not isinstance(other, PLZMap):
            from .composite import compose_mixed
            return compose_mixed(self, other)
        if other.is_identity():
            return self
        if self.is_identity():
            return other
        inv_other = other.inverse()
        nodes = set(other._xs)
        for x in self._xs:
            p = inv_other.evaluate(x)
            nodes.add(p - math.floor(p))
        pts = [(x, self.evaluate(other.evaluate(x))) for x in sorted(nodes)]
        return PLZMap(pts, self._orientation * other._orientation)

    def conjugate_by(self, h: "PLZMap") -> "PLZMap":
        """h ∘ self ∘ h^{-1}."""
        return h.compose(self).compose(h.inverse())

    # dynamics -------------------------------------------------------------

    def displacement_range(self) -> Tuple[Fraction, Fraction]:
        """Exact (min, max) of f(x) - x over a period; preserving maps only."""
        if self._orientation is not Orientation.PRESERVING:
            raise ValueError("displacement is unbounded for reversing maps")
        d = [y - x for x, y in self.breakpoints]
        return min(d), max(d)

    def translation_bounds(self) -> TranslationInterval:
        lo, hi = self.displacement_range()
        return TranslationInterval(lo, hi, closed=True)

    def fixed_points(self) -> FixedPointSet:
        if self._fps is None:
            object.__setattr__(self, "_fps", self._solve_fixed_points())
        return self._fps

    def _solve_fixed_points(self) -> FixedPointSet:
        if self._orientation is Orientation.REVERSING:
            return self._reversing_fixed_point()
        segs = self.segments()
        k = len(segs)
        d = [y - x for x, y in self.breakpoints]
        d.append(d[0])  # wrap: node at 1 carries d_0
        if all(v == 0 for v in d):
            return FixedPointSet((FixedPoint(Fraction(0), Kind.DEGENERATE),), whole_line=True)
        found = {}
        for i in range(k):
            (xa, _), (xb, _) = segs[i]
            da, db = d[i], d[i + 1]
            if da == 0 and db == 0:
                found[xa] = Kind.DEGENERATE
                found[xb % 1] = Kind.DEGENERATE
            elif da * db < 0:
                root = xa + da * (xb - xa) / (da - db)
                found[root] = Kind.ATTRACTING if da > 0 else Kind.REPELLING
        for i in range(k):
            if d[i] != 0 or self._xs[i] in found:
                continue
            left = d[i - 1] if i > 0 else d[k - 1]
            right = d[i + 1]
            if left > 0 > right:
                kind = Kind.ATTRACTING
            elif left < 0 < right:
                kind = Kind.REPELLING
            else:
                kind = Kind.DEGENERATE
            found[self._xs[i]] = kind
        pts = tuple(FixedPoint(x, found[x]) for x in sorted(found))
        return FixedPointSet(pts)

    def _reversing_fixed_point(self) -> FixedPointSet:
        # d(x) = f(x) - x is strictly decreasing with d(x + 1) = d(x) - 2
        d0 = self._ys[0]
        n = math.floor(d0 / 2)
        for (xa, ya), (xb, yb) in self.segments():
            # shift the segment to [n + xa, n + xb]: f(x + n) = f(x) - n
            da = (ya - n) - (xa + n)
            db = (yb - n) - (xb + n)
            if da >= 0 >= db:
                root = xa + n + da * (xb - xa) / (da - db)
                kind = self._reversing_kind(root)
                return FixedPointSet((FixedPoint(root, kind),))
        raise AssertionError("orientation-reversing map without fixed point")

    def _reversing_kind(self, p: Fraction) -> Kind:
        slopes = self.slopes()
        f = p - math.floor(p)
        i = bisect_right(self._xs, f) - 1
        right = abs(slopes[i])
        left = abs(slopes[i - 1]) if f == self._xs[i] else right
        if left < 1 and right < 1:
            return Kind.ATTRACTING
        if left > 1 and right > 1:
            return Kind.REPELLING
        return Kind.DEGENERATE


def _canonical(pts: Sequence[Point], orientation: Orientation):
    sign = orientation.sign
    reduced = {}
    for x, y in pts:
        n = math.floor(x)
        fx, fy = x - n, y - sign * n
        if fx in reduced and reduced[fx] != fy:
            raise ValidationError(f"conflicting values at x = {fx}")
        reduced[fx] = fy
    xs = sorted(reduced)
    ys = [reduced[x] for x in xs]
    if xs[0] != 0:
        # value at 0 from the wrap segment ending at (1 + x_0, y_0 + sign)
        xa, ya = xs[-1] - 1, ys[-1] - sign
        xb, yb = xs[0], ys[0]
        y_at_0 = ya + (yb - ya) * (0 - xa) / (xb - xa)
        xs.insert(0, Fraction(0))
        ys.insert(0, y_at_0)
    ext_x = xs + [Fraction(1)]
    ext_y = ys + [ys[0] + sign]
    for i in range(len(xs)):
        step = ext_y[i + 1] - ext_y[i]
        if step * sign <= 0:
            raise ValidationError("breakpoints do not define a strictly monotone map")
    keep_x = [xs[0]]
    keep_y = [ys[0]]
    for i in range(1, len(xs)):
        px, py = keep_x[-1], keep_y[-1]
        nx, ny = ext_x[i + 1], ext_y[i + 1]
        # exact collinearity of (prev kept, i, next)
        if (ext_y[i] - py) * (nx - ext_x[i]) == (ny - ext_y[i]) * (ext_x[i] - px):
            continue
        keep_x.append(xs[i])
        keep_y.append(ys[i])
    return tuple(keep_x), tuple(keep_y)
