"""Exact geometry of the skew orbit-space strip.

The strip is ``{(x, y) : |x - y| < 1}`` with unstable leaves vertical
(``x`` constant) and stable leaves horizontal (``y`` constant). All
coordinates are ``Fraction``; floats only appear when writing SVG.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import PreconditionError, ValidationError


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return Fraction(int(v[0]), int(v[1]))
    return Fraction(v)


@dataclass(frozen=True, order=True)
class OrbitPoint:
    """A point of the strip; ``x`` is the unstable and ``y`` the stable coordinate."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _q(self.x))
        object.__setattr__(self, "y", _q(self.y))
        if abs(self.x - self.y) >= 1:
            raise PreconditionError(f"({self.x}, {self.y}) is outside the strip")

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"

    def to_json(self) -> list:
        return [str(self.x), str(self.y)]


def in_strip(x, y) -> bool:
    return abs(_q(x) - _q(y)) < 1


def eta(o: OrbitPoint) -> OrbitPoint:
    """Half-step-up map: the stable leaf through the upper ideal corner meets
    the unstable leaf through the lower one at ``(y + 1, x + 1)``."""
    return OrbitPoint(o.y + 1, o.x + 1)


def eta_power(o: OrbitPoint, k: int) -> OrbitPoint:
    # eta^2 = tau is (x, y) -> (x + 2, y + 2)
    q, r = divmod(k, 2)
    p = OrbitPoint(o.x + 2 * q, o.y + 2 * q)
    return eta(p) if r else p


def tau(o: OrbitPoint) -> OrbitPoint:
    return eta(eta(o))


def project_s(o: OrbitPoint) -> Fraction:
    return o.y


def project_u(o: OrbitPoint) -> Fraction:
    return o.x


def project_s_normalized(o: OrbitPoint) -> Fraction:
    """Stable coordinate in the leaf-space chart where tau acts as x -> x + 1."""
    return o.y / 2


@dataclass(frozen=True, order=True)
class Lozenge:
    """Lozenge with corners ``corner`` and ``eta(corner)``.

    As a set it is the open rectangle ``(x, y + 1) x (y, x + 1)`` together with
    the two corners; the sides are excluded.
    """

    corner: OrbitPoint

    @property
    def top(self) -> OrbitPoint:
        return eta(self.corner)

    def corners(self) -> Tuple[OrbitPoint, OrbitPoint]:
        return (self.corner, self.top)

    def x_range(self) -> Tuple[Fraction, Fraction]:
        return (self.corner.x, self.corner.y + 1)

    def y_range(self) -> Tuple[Fraction, Fraction]:
        return (self.corner.y, self.corner.x + 1)

    def ideal_corners(self) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
        """The two corners on the strip boundary (not points of the strip)."""
        x, y = self.corner.x, self.corner.y
        return ((y + 1, y), (x, x + 1))

    def contains(self, p: OrbitPoint) -> bool:
        if p in self.corners():
            return True
        x0, x1 = self.x_range()
        y0, y1 = self.y_range()
        return x0 < p.x < x1 and y0 < p.y < y1


def string_of_lozenges(o: OrbitPoint, n_range: int) -> List[Lozenge]:
    """Lozenges with corners eta^k(o) for k in [-n_range, n_range]."""
    if n_range < 0:
        raise PreconditionError("n_range must be nonnegative")
    return [Lozenge(eta_power(o, k)) for k in range(-n_range, n_range + 1)]


class Direction(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    UNION = "union"


@dataclass(frozen=True)
class SaturationRegion:
    base: Lozenge
    direction: Direction = Direction.STABLE

    def contains(self, p: OrbitPoint) -> bool:
        return saturation_contains(self, p)


def _in_stable(L: Lozenge, p: OrbitPoint) -> bool:
    # the horizontal leaf through p meets L iff y lies in the closed y-range
    y0, y1 = L.y_range()
    return y0 <= p.y <= y1


def _in_unstable(L: Lozenge, p: OrbitPoint) -> bool:
    x0, x1 = L.x_range()
    return x0 <= p.x <= x1


def saturation_contains(R: SaturationRegion, p: OrbitPoint) -> bool:
    if R.direction is Direction.STABLE:
        return _in_stable(R.base, p)
    if R.direction is Direction.UNSTABLE:
        return _in_unstable(R.base, p)
    return _in_stable(R.base, p) or _in_unstable(R.base, p)


def lozenge_in_saturation(inner: Lozenge, outer: Lozenge, direction: Direction) -> bool:
    """Whether every point of ``inner`` lies in the saturation of ``outer``.

    The leaves through ``inner`` sweep exactly its closed coordinate range, so
    comparing ranges is exact.
    """
    if direction is Direction.UNION:
        return (lozenge_in_saturation(inner, outer, Direction.STABLE)
                or lozenge_in_saturation(inner, outer, Direction.UNSTABLE))
    if direction is Direction.STABLE:
        (a, b), (c, d) = inner.y_range(), outer.y_range()
    else:
        (a, b), (c, d) = inner.x_range(), outer.x_range()
    return c <= a and b <= d


class Containment(enum.Enum):
    STABLE_CONTAINED = "stable_contained"
    UNSTABLE_CONTAINED = "unstable_contained"
    NEITHER = "neither"


def consecutive_lozenge_check(L_prev: Lozenge, L_next: Lozenge) -> Containment:
    """Relative position of two lozenges; stable containment takes precedence."""
    if lozenge_in_saturation(L_next, L_prev, Direction.STABLE):
        return Containment.STABLE_CONTAINED
    if lozenge_in_saturation(L_next, L_prev, Direction.UNSTABLE):
        return Containment.UNSTABLE_CONTAINED
    return Containment.NEITHER


# ---------------------------------------------------------------- rendering

STYLE = {
    "width": 480,
    "height": 480,
    "background": "#ffffff",
    "boundary": "stroke:#444444;stroke-width:1.5;stroke-dasharray:6 4;fill:none",
    "stable": "stroke:#1f5fa8;stroke-width:1.5;fill:none",
    "unstable": "stroke:#b8321e;stroke-width:1.5;fill:none",
    "lozenge": "stroke:#222222;stroke-width:1.2;fill:#f2d16b;fill-opacity:0.55",
    "region": "stroke:none;fill:#7a7a7a;fill-opacity:0.25",
    "point": "fill:#000000",
    "label": "font-family:sans-serif;font-size:14px;fill:#000000",
}


@dataclass(frozen=True)
class Viewport:
    xmin: Fraction
    xmax: Fraction
    ymin: Fraction
    ymax: Fraction

    def __post_init__(self):
        for f in ("xmin", "xmax", "ymin", "ymax"):
            object.__setattr__(self, f, _q(getattr(self, f)))
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise PreconditionError("empty viewport")


@dataclass
class Scene:
    """Things to draw. Leaves are ``(direction, point)`` pairs; regions are
    saturation regions of lozenges; points carry optional labels."""

    points: List[Tuple[OrbitPoint, str]] = field(default_factory=list)
    leaves: List[Tuple[Direction, OrbitPoint]] = field(default_factory=list)
    lozenges: List[Lozenge] = field(default_factory=list)
    regions: List[SaturationRegion] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "points": [{"at": p.to_json(), "label": lab} for p, lab in self.points],
            "leaves": [{"direction": d.value, "through": p.to_json()} for d, p in self.leaves],
            "lozenges": [{"corner": L.corner.to_json()} for L in self.lozenges],
            "regions": [{"corner": R.base.corner.to_json(), "direction": R.direction.value}
                        for R in self.regions],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Scene":
        try:
            def pt(v):
                return OrbitPoint(_q(v[0]), _q(v[1]))
            return cls(
                points=[(pt(p["at"]), str(p.get("label", ""))) for p in d.get("points", [])],
                leaves=[(Direction(l["direction"]), pt(l["through"])) for l in d.get("leaves", [])],
                lozenges=[Lozenge(pt(l["corner"])) for l in d.get("lozenges", [])],
                regions=[SaturationRegion(Lozenge(pt(r["corner"])), Direction(r["direction"]))
                         for r in d.get("regions", [])],
            )
        except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError,
                PreconditionError) as exc:
            raise ValidationError(f"invalid scene: {exc}") from None


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, vp: Viewport):
        self.vp = vp
        self.w, self.h = STYLE["width"], STYLE["height"]
        self.sx = self.w / float(vp.xmax - vp.xmin)
        self.sy = self.h / float(vp.ymax - vp.ymin)

    def xy(self, x, y) -> str:
        px = (float(x) - float(self.vp.xmin)) * self.sx
        py = (float(self.vp.ymax) - float(y)) * self.sy
        return f"{_fmt(px)},{_fmt(py)}"

    def line(self, a, b, cls: str, style: str) -> str:
        (x1, y1), (x2, y2) = self.xy(*a).split(","), self.xy(*b).split(",")
        return (f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                f'style="{style}"/>')

    def polygon(self, pts, cls: str, style: str) -> str:
        return (f'<polygon class="{cls}" points="{" ".join(self.xy(*p) for p in pts)}" '
                f'style="{style}"/>')


def _saturation_polygons(R: SaturationRegion) -> List[List[Tuple[Fraction, Fraction]]]:
    x, y = R.base.corner.x, R.base.corner.y
    stable = [(y - 1, y), (y + 1, y), (x + 2, x + 1), (x, x + 1)]
    unstable = [(x, x - 1), (y + 1, y), (y + 1, y + 2), (x, x + 1)]
    if R.direction is Direction.STABLE:
        return [stable]
    if R.direction is Direction.UNSTABLE:
        return [unstable]
    return [stable, unstable]


def render_svg(scene: Scene, viewport: Viewport) -> str:
    """Deterministic SVG 1.1 text for ``scene`` clipped to ``viewport``."""
    if not isinstance(viewport, Viewport):
        viewport = Viewport(*viewport)
    vp = viewport
    c = _Canvas(vp)
    lo = min(vp.xmin, vp.ymin) - 2
    hi = max(vp.xmax, vp.ymax) + 2
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c.w}" '
        f'height="{c.h}" viewBox="0 0 {c.w} {c.h}">',
        f'<defs><clipPath id="vp"><rect x="0" y="0" width="{c.w}" height="{c.h}"/>'
        '</clipPath></defs>',
        f'<rect x="0" y="0" width="{c.w}" height="{c.h}" style="fill:{STYLE["background"]}"/>',
        '<g clip-path="url(#vp)">',
    ]
    for R in scene.regions:
        for poly in _saturation_polygons(R):
            out.append(c.polygon(poly, f"region {R.direction.value}", STYLE["region"]))
    for L in scene.lozenges:
        (ax, ay), (bx, by) = L.ideal_corners()
        poly = [(L.corner.x, L.corner.y), (ax, ay), (L.top.x, L.top.y), (bx, by)]
        out.append(c.polygon(poly, "lozenge", STYLE["lozenge"]))
    for off in (1, -1):
        # boundary lines y = x + 1 and y = x - 1
        out.append(c.line((lo, lo + off), (hi, hi + off), "boundary", STYLE["boundary"]))
    for d, p in scene.leaves:
        if d is Direction.STABLE:
            a, b = (p.y - 1, p.y), (p.y + 1, p.y)
        else:
            a, b = (p.x, p.x - 1), (p.x, p.x + 1)
        out.append(c.line(a, b, f"leaf {d.value}", STYLE[d.value]))
    for p, label in scene.points:
        px, py = c.xy(p.x, p.y).split(",")
        out.append(f'<circle class="point" cx="{px}" cy="{py}" r="3" style="{STYLE["point"]}"/>')
        if label:
            tx, ty = _fmt(float(px) + 6), _fmt(float(py) - 6)
            text = label.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            out.append(f'<text class="label" x="{tx}" y="{ty}" style="{STYLE["label"]}">'
                       f'{text}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- presets

def _figure1() -> Tuple[Scene, Viewport]:
    o = OrbitPoint(Fraction(3, 2), Fraction(3, 2))
    e = eta(o)
    # eta(o) sits where the stable leaf of the upper ideal corner of o
    # meets the unstable leaf of the lower one
    scene = Scene(points=[(o, "o"), (e, "η(o)")],
                  leaves=[(Direction.STABLE, e), (Direction.UNSTABLE, e)])
    return scene, Viewport(0, 4, 0, 4)


def _figure2() -> Tuple[Scene, Viewport]:
    o = OrbitPoint(Fraction(3, 2), Fraction(3, 2))
    chain = string_of_lozenges(o, 1)
    pts = [(eta_power(o, k), "o" if k == 0 else f"η^{k}(o)") for k in range(-1, 3)]
    return Scene(points=pts, lozenges=chain), Viewport(0, 4, 0, 4)


def _figure3() -> Tuple[Scene, Viewport]:
    L0 = Lozenge(OrbitPoint(Fraction(3, 2), Fraction(3, 2)))
    scene = Scene(points=[(L0.corner, "L₀")], lozenges=[L0],
                  regions=[SaturationRegion(L0, Direction.STABLE),
                           SaturationRegion(L0, Direction.UNSTABLE)])
    return scene, Viewport(0, 4, 0, 4)


def _figure4() -> Tuple[Scene, Viewport]:
    L0 = Lozenge(OrbitPoint(Fraction(3, 2), Fraction(3, 2)))
    L1 = Lozenge(OrbitPoint(Fraction(6, 5), Fraction(8, 5)))
    return Scene(lozenges=[L0, L1], regions=[SaturationRegion(L0, Direction.STABLE)]), \
        Viewport(0, 4, 0, 4)


PRESETS: Dict[str, object] = {
    "figure1": _figure1,
    "figure2": _figure2,
    "figure3": _figure3,
    "figure4": _figure4,
}


def preset(name: str) -> Tuple[Scene, Viewport]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
