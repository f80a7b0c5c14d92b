"""Built-in representations and random generators of test elements."""

from __future__ import annotations

import math
import random
import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .reps import Representation
from .zhomeo import MoebiusLift, Orientation, PLZMap

GENUS2_RELATOR = "a b^-1 c d^-1 a^-1 b c^-1 d z^2"
TRIANGLE_RELATORS = ("x^2 z^-1", "y^3 z", "x y x y x y x y x y x y x y z^-1")

BUILTIN_NAMES = ("geodesic_genus2", "triangle_237", "random_pl(k)", "random_pl_twisted(k)")


def _rot(theta: float):
    c, s = math.cos(theta), math.sin(theta)
    return ((c, -s), (s, c))


def _mat_mul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def genus2_matrices() -> List[Tuple[Tuple[float, float], Tuple[float, float]]]:
    """Side pairings of the regular hyperbolic octagon with angles pi/4.

    The k-th generator is the hyperbolic element with translation length
    2 arccosh(1 + sqrt 2) whose axis is rotated by k pi/4 in the disk, which
    in SL(2, R) is conjugation of a diagonal matrix by a rotation of -k pi/8.
    """
    ch = 1 + math.sqrt(2)
    lam = ch + math.sqrt(ch * ch - 1)
    diag = ((lam, 0.0), (0.0, 1 / lam))
    out = []
    for k in range(4):
        m = _mat_mul(_mat_mul(_rot(-k * math.pi / 8), diag), _rot(k * math.pi / 8))
        out.append(m)
    return out


def geodesic_genus2() -> Representation:
    gens = {n: MoebiusLift(m) for n, m in zip("abcd", genus2_matrices())}
    tau = MoebiusLift.translation(1)
    gens["z"] = tau
    return Representation(gens, tau, [GENUS2_RELATOR], center="z", name="geodesic_genus2")


def triangle_237() -> Representation:
    """The (2,3,7) triangle group lifted to the unit tangent bundle."""
    t = 2 * math.cos(math.pi / 7)
    c = (-t + math.sqrt(t * t - 3)) / 2
    b = t + c
    tau = MoebiusLift.translation(1)
    gens = {
        "x": MoebiusLift(((0.0, -1.0), (1.0, 0.0))),
        "y": MoebiusLift(((0.5, b), (c, 0.5))),
        "z": tau,
    }
    return Representation(gens, tau, TRIANGLE_RELATORS, center="z", name="triangle_237")


def _grid_points(rng: random.Random, count: int, denom: int) -> List[Fraction]:
    return [Fraction(v, denom) for v in sorted(rng.sample(range(denom), count))]


def pingpong_map(rep_iv: Tuple[Fraction, Fraction], att_iv: Tuple[Fraction, Fraction]) -> PLZMap:
    """Two-piece map contracting the complement of ``rep_iv`` into ``att_iv``.

    With ``rep_iv = [p, q]`` and ``att_iv = [r, s]`` cyclically ordered as
    p < q < r < s < p + 1, the map sends q to r and p + 1 to s.
    """
    p, q = rep_iv
    r, s = att_iv
    if r < q:
        r, s = r + 1, s + 1
    return PLZMap([(p, s - 1), (q, r)])


def random_pl(k: int = 2, seed: Optional[int] = 0) -> Representation:
    """k ping-pong generators plus the center z -> T_1.

    Each generator has a repelling and an attracting interval, all 2k of them
    pairwise disjoint mod 1, so every reduced word with fixed points is
    hyperbolic-like.
    """
    if k < 1:
        raise ValueError("random_pl needs at least one generator")
    rng = random.Random(seed)
    pts = _grid_points(rng, 4 * k, 64 * k)
    intervals = [(pts[2 * i], pts[2 * i + 1]) for i in range(2 * k)]
    rng.shuffle(intervals)
    names = _names(k)
    gens = {n: pingpong_map(intervals[2 * i], intervals[2 * i + 1]) for i, n in enumerate(names)}
    tau = PLZMap.translation(1)
    gens["z"] = tau
    return Representation(gens, tau, [], center="z", name=f"random_pl({k})")


def random_pl_twisted(k: int = 2, seed: Optional[int] = 0) -> Representation:
    """``random_pl`` plus an orientation-reversing involution r(x) = -x.

    The ping-pong intervals sit in (0, 1/2) so that their mirror images under
    r land in (1/2, 1); conjugating by r then keeps the ping-pong property.
    """
    rng = random.Random(seed)
    pts = [Fraction(v, 128 * k) for v in sorted(rng.sample(range(1, 64 * k), 4 * k))]
    intervals = [(pts[2 * i], pts[2 * i + 1]) for i in range(2 * k)]
    rng.shuffle(intervals)
    names = _names(k)
    gens = {n: pingpong_map(intervals[2 * i], intervals[2 * i + 1]) for i, n in enumerate(names)}
    gens["r"] = PLZMap.reflection(0)
    tau = PLZMap.translation(1)
    gens["z"] = tau
    return Representation(gens, tau, ["r^2"], center="z", name=f"random_pl_twisted({k})")


def _names(k: int) -> List[str]:
    base = "abcdefghijklmnopqrstuvwxy"
    if k > len(base) - 1:
        raise ValueError("too many generators")
    return [ch for ch in base if ch not in "rz"][:k]


def builtin_model(name: str, seed: Optional[int] = None) -> Representation:
    m = re.fullmatch(r"(random_pl|random_pl_twisted)(?:\((\d+)\))?", name)
    if m:
        k = int(m.group(2) or 2)
        ctor = random_pl if m.group(1) == "random_pl" else random_pl_twisted
        return ctor(k, 0 if seed is None else seed)
    if name == "geodesic_genus2":
        return geodesic_genus2()
    if name == "triangle_237":
        return triangle_237()
    raise KeyError(f"unknown builtin model {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


# random elements for the lemma suites ---------------------------------------

def hyperbolic_map(repelling: Fraction, attracting: Fraction,
                   strength: Tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(1, 2))) -> PLZMap:
    """Hyperbolic-like PL map with the given fixed points in [0, 1).

    The displacement peaks at the midpoints between the fixed points, with
    height ``strength`` times the largest value keeping the map monotone.
    """
    r, p = repelling, attracting
    if r == p:
        raise ValueError("fixed points must differ")
    if p < r:
        p += 1
    m1 = (r + p) / 2
    m2 = (p + r + 1) / 2
    d1 = strength[0] * (p - m1)
    d2 = strength[1] * (m2 - p)
    return PLZMap([(r, r), (m1, m1 + d1), (p, p), (m2, m2 - d2)])


def _strength(rng: random.Random) -> Tuple[Fraction, Fraction]:
    return (Fraction(rng.randint(50, 90), 100), Fraction(rng.randint(50, 90), 100))


def _points(rng: random.Random, n: int, gap: Fraction = Fraction(1, 20)) -> List[Fraction]:
    """n sorted points of [0, 1) pairwise at circular distance >= gap."""
    denom = 720
    while True:
        pts = sorted(Fraction(v, denom) for v in rng.sample(range(denom), n))
        diffs = [pts[i + 1] - pts[i] for i in range(n - 1)] + [pts[0] + 1 - pts[-1]]
        if min(diffs) >= gap:
            return pts


def random_linked_pair(rng: random.Random) -> Tuple[PLZMap, PLZMap]:
    """Fixed points interleave: a point of b between the two points of a."""
    w, x, y, z = _points(rng, 4)
    a_pts = [w, y]
    b_pts = [x, z]
    rng.shuffle(a_pts)
    rng.shuffle(b_pts)
    return (hyperbolic_map(a_pts[0], a_pts[1], _strength(rng)),
            hyperbolic_map(b_pts[0], b_pts[1], _strength(rng)))


UNLINKED_PATTERNS = (
    ("a+", "a-", "b-", "b+"),
    ("a+", "a-", "b+", "b-"),
    ("a+", "b-", "b+", "a-"),
    ("a+", "b+", "b-", "a-"),
)


def random_unlinked_pair(rng: random.Random, pattern=None) -> Tuple[PLZMap, PLZMap]:
    """Unlinked pair whose fixed points read ``pattern`` going right from a+."""
    if pattern is None:
        pattern = rng.choice(UNLINKED_PATTERNS)
    pts = _points(rng, 4)
    start = rng.randrange(4)
    where = {}
    for i, label in enumerate(pattern):
        where[label] = pts[(start + i) % 4]
    a = hyperbolic_map(where["a-"], where["a+"], _strength(rng))
    b = hyperbolic_map(where["b-"], where["b+"], _strength(rng))
    return a, b


def random_conjugator(rng: random.Random, nodes: int = 3,
                      orientation: Orientation = Orientation.PRESERVING) -> PLZMap:
    """Random PL element commuting with T_1, used as a change of coordinates."""
    denom = 97
    xs = sorted(rng.sample(range(denom), nodes))
    ys = sorted(rng.sample(range(denom), nodes))
    shift = rng.randrange(denom)
    pts = [(Fraction(x, denom), Fraction(y + shift, denom)) for x, y in zip(xs, ys)]
    h = PLZMap(pts)
    if orientation is Orientation.REVERSING:
        h = PLZMap.reflection(0).compose(h)
    return h
