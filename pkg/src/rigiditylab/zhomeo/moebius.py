"""Lifts of projective SL(2, R) actions to the line.

The coordinate ``t`` on the line corresponds to the direction
``(cos(pi t), sin(pi t))`` in RP^1, so T_1 is the deck transformation. For a
matrix with no negative eigenvalue the canonical lift is

    F_0(t) = t + angle(v, A v) / pi,    angle in (-pi, pi),

whose displacement lies in (-1, 1). A ``MoebiusLift`` is ``F_0 + deck``.
"""

from __future__ import annotations

import math
from typing import Tuple

from ..errors import ValidationError
from .base import (
    Classification,
    FixedPoint,
    FixedPointSet,
    Kind,
    LineElement,
    Number,
    Orientation,
)

Matrix = Tuple[Tuple[float, float], Tuple[float, float]]

DET_TOL = 1e-12
CERT_RADIUS = 1e-12
# trace window treated as parabolic
PARABOLIC_TOL = 1e-12


_EPS = 2.0 ** -52


def _circ(x: float, y: float) -> float:
    d = abs(x - y) % 1.0
    return min(d, 1.0 - d)


def _normalize(m) -> Matrix:
    (a, b), (c, d) = m
    a, b, c, d = float(a), float(b), float(c), float(d)
    if a + d < 0:
        a, b, c, d = -a, -b, -c, -d
    return ((a, b), (c, d))


def _mul(m: Matrix, n: Matrix) -> Matrix:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


class MoebiusLift(LineElement):
    backend = "moebius"
    __slots__ = ("matrix", "deck", "_fps")

    def __init__(self, matrix, deck: int = 0, *, check: bool = True):
        m = _normalize(matrix)
        if check:
            (a, b), (c, d) = m
            det = a * d - b * c
            if abs(det - 1.0) > DET_TOL * max(1.0, abs(a * d), abs(b * c)):
                raise ValidationError(f"determinant {det!r} is not 1")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "deck", int(deck))
        object.__setattr__(self, "_fps", None)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusLift is immutable")

    @classmethod
    def translation(cls, k: int) -> "MoebiusLift":
        return cls(((1.0, 0.0), (0.0, 1.0)), k)

    @classmethod
    def identity(cls) -> "MoebiusLift":
        return cls.translation(0)

    def identity_like(self) -> "MoebiusLift":
        return MoebiusLift.identity()

    @property
    def orientation(self) -> Orientation:
        return Orientation.PRESERVING

    @property
    def trace(self) -> float:
        return self.matrix[0][0] + self.matrix[1][1]

    def is_projective_identity(self, tol: float = 1e-12) -> bool:
        (a, b), (c, d) = self.matrix
        return abs(a - 1) <= tol and abs(d - 1) <= tol and abs(b) <= tol and abs(c) <= tol

    def is_identity(self) -> bool:
        return self.deck == 0 and self.is_projective_identity()

    def __repr__(self) -> str:
        return f"MoebiusLift({self.matrix!r}, deck={self.deck})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MoebiusLift):
            return NotImplemented
        return self.deck == other.deck and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.matrix, self.deck))

    def approx_equal(self, other: "MoebiusLift", tol: float = 1e-9) -> bool:
        if not all(abs(x - y) <= tol * max(1.0, abs(x))
                   for r, s in zip(self.matrix, other.matrix) for x, y in zip(r, s)):
            return False
        return abs(self.evaluate(0.0) - other.evaluate(0.0)) < 0.5

    def canonical_displacement(self, t: float) -> float:
        (a, b), (c, d) = self.matrix
        th = math.pi * t
        vx, vy = math.cos(th), math.sin(th)
        wx, wy = a * vx + b * vy, c * vx + d * vy
        return math.atan2(vx * wy - vy * wx, vx * wx + vy * wy) / math.pi

    def evaluate(self, x: Number) -> float:
        t = float(x)
        return t + self.canonical_displacement(t) + self.deck

    def compose(self, other: LineElement) -> LineElement:
        if not isinstance(other, MoebiusLift):
            from .composite import compose_mixed
            return compose_mixed(self, other)
        m = _mul(self.matrix, other.matrix)
        prod = MoebiusLift(m, 0, check=False)
        t0 = 0.25
        target = self.evaluate(other.evaluate(t0))
        deck = round(target - prod.evaluate(t0))
        return MoebiusLift(prod.matrix, deck, check=False)

    def inverse(self) -> "MoebiusLift":
        (a, b), (c, d) = self.matrix
        inv = MoebiusLift(((d, -b), (-c, a)), 0, check=False)
        t0 = 0.25
        # F^{-1}(F(t0)) = t0
        deck = round(t0 - inv.evaluate(self.evaluate(t0)))
        return MoebiusLift(inv.matrix, deck, check=False)

    # fixed points ---------------------------------------------------------

    def _eigen(self):
        (a, b), (c, d) = self.matrix
        tr = a + d
        disc = tr * tr - 4.0
        if disc <= 0:
            return None
        s = math.sqrt(disc)
        lam = (tr + s) / 2.0
        mu = 1.0 / lam
        return lam, mu

    def _eigendirection(self, lam: float) -> float:
        (a, b), (c, d) = self.matrix
        v1 = (b, lam - a)
        v2 = (lam - d, c)
        vx, vy = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
        t = math.atan2(vy, vx) / math.pi
        return t - math.floor(t)

    def classification_hint(self) -> Classification:
        tr = self.trace
        if self.deck != 0:
            return Classification.FIXED_POINT_FREE
        if self.is_projective_identity():
            return Classification.IDENTITY
        if abs(tr - 2.0) <= PARABOLIC_TOL * max(1.0, tr):
            return Classification.DEGENERATE
        if tr > 2.0:
            return Classification.HYPERBOLIC_LIKE
        return Classification.FIXED_POINT_FREE

    def fixed_points(self) -> FixedPointSet:
        if self._fps is None:
            object.__setattr__(self, "_fps", self._solve_fixed_points())
        return self._fps

    def _solve_fixed_points(self) -> FixedPointSet:
        hint = self.classification_hint()
        if hint is Classification.FIXED_POINT_FREE:
            return FixedPointSet()
        if hint is Classification.IDENTITY:
            return FixedPointSet((FixedPoint(0.0, Kind.DEGENERATE),), whole_line=True)
        if hint is Classification.DEGENERATE:
            (a, b), (c, d) = self.matrix
            t = self._eigendirection(1.0)
            return FixedPointSet((FixedPoint(t, Kind.DEGENERATE, 1e-6),))
        lam, mu = self._eigen()
        t_att, t_rep = self._eigendirection(lam), self._eigendirection(mu)
        half = _circ(t_att, t_rep) / 2
        att = FixedPoint(t_att, Kind.ATTRACTING, self._radius(t_att, 1, half, lam, mu))
        rep = FixedPoint(t_rep, Kind.REPELLING, self._radius(t_rep, -1, half, lam, mu))
        pts = tuple(sorted((att, rep), key=lambda p: p.location))
        return FixedPointSet(pts)

    def _cross(self, t: float) -> Tuple[float, float]:
        """Signed cross product of v(t) and A v(t), with a rounding bound."""
        (a, b), (c, d) = self.matrix
        th = math.pi * t
        vx, vy = math.cos(th), math.sin(th)
        wx, wy = a * vx + b * vy, c * vx + d * vy
        scale = abs(a) + abs(b) + abs(c) + abs(d)
        return vx * wy - vy * wx, 8 * _EPS * scale

    def _radius(self, t: float, sign: int, half: float, lam: float, mu: float) -> float:
        # A posteriori: the smallest radius from CERT_RADIUS up at which the
        # displacement has the sign of the fixed point's kind on both sides,
        # beyond rounding. Attracting (sign 1) means + on the left, - on the right.
        r = CERT_RADIUS
        while r < half:
            lo, err_lo = self._cross(t - r)
            hi, err_hi = self._cross(t + r)
            if sign * lo > err_lo and -sign * hi > err_hi:
                return r
            r *= 4
        norm2 = sum(x * x for row in self.matrix for x in row)
        return max(CERT_RADIUS, 4e-16 * norm2 / max(lam - mu, 1e-300))

    def derivative_at_attractor(self) -> float:
        """Derivative of the lift at its attracting fixed points, 1 / lambda^2."""
        eig = self._eigen()
        if eig is None or self.deck != 0:
            raise ValueError("no attracting fixed point")
        lam, mu = eig
        return mu / lam

    def to_pl(self, n_nodes: int = 4096):
        """PL interpolant of this lift on the nodes k / n_nodes."""
        from fractions import Fraction
        from .pl import PLZMap
        pts = [(Fraction(k, n_nodes), Fraction(self.evaluate(k / n_nodes)))
               for k in range(n_nodes)]
        return PLZMap(pts)
