"""JSON encoding of elements, representations and reports."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .reps import Representation
from .zhomeo import Conjugated, LineElement, MoebiusLift, Orientation, PLZMap

_SAFE_INT = 2 ** 53


def _int_json(n: int):
    return n if abs(n) < _SAFE_INT else str(n)


def _rat_json(q: Fraction) -> list:
    return [_int_json(q.numerator), _int_json(q.denominator)]


def _rat(num, den) -> Fraction:
    return Fraction(int(num), int(den))


def element_to_json(e: LineElement) -> dict:
    if isinstance(e, PLZMap):
        return {"backend": "pl", "orientation": e.orientation.value,
                "breakpoints": [_rat_json(x) + _rat_json(y) for x, y in e.breakpoints]}
    if isinstance(e, MoebiusLift):
        return {"backend": "moebius", "matrix": [list(r) for r in e.matrix], "deck": e.deck}
    if isinstance(e, Conjugated):
        return {"backend": "conjugated", "conjugator": element_to_json(e.conjugator),
                "inner": element_to_json(e.inner)}
    raise ValidationError(f"cannot serialize a {e.backend} element")


def element_from_json(d: dict) -> LineElement:
    backend = d.get("backend")
    if backend is None:
        backend = "moebius" if "matrix" in d else "pl"
    if backend == "pl":
        pts = [(_rat(a, b), _rat(c, e)) for a, b, c, e in d["breakpoints"]]
        return PLZMap(pts, Orientation(d.get("orientation", "preserving")))
    if backend == "moebius":
        return MoebiusLift(d["matrix"], int(d.get("deck", 0)))
    if backend == "conjugated":
        conj = element_from_json(d["conjugator"])
        if not isinstance(conj, PLZMap):
            raise ValidationError("conjugator must be a PL map")
        return Conjugated(conj, element_from_json(d["inner"]))
    raise ValidationError(f"unknown backend {backend!r}")


def rep_to_json(rep: Representation) -> dict:
    return {
        "name": rep.name,
        "backend": rep.backend(),
        "generators": {n: element_to_json(g) for n, g in rep.generators.items()},
        "relators": [str(r) for r in rep.relators],
        "tau": element_to_json(rep.tau),
        "center": rep.center,
        "orientation": {n: o.value for n, o in rep.orientation_map.items()},
    }


def rep_from_json(d: dict) -> Representation:
    try:
        gens = {n: element_from_json(g) for n, g in d["generators"].items()}
        tau = element_from_json(d["tau"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed model: {exc}") from None
    declared = d.get("orientation") or {}
    for n, o in declared.items():
        if n in gens and gens[n].orientation is not Orientation(o):
            raise ValidationError(f"generator {n} is declared {o} but is not")
    return Representation(gens, tau, d.get("relators", []), d.get("center"),
                          d.get("name", "model"))


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
