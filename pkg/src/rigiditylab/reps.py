"""Representations of finitely generated groups into Homeo^Z(R) and their spectra."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ._parallel import pmap
from .errors import (
    InconsistencyError,
    PreconditionError,
    UnboundWordError,
    ValidationError,
)
from .words import Alphabet, Word, as_word, class_keys
from .zhomeo import (
    Classification,
    Conjugated,
    LineElement,
    MoebiusLift,
    Orientation,
    PLZMap,
    TranslationInterval,
    classify,
    translation_number,
)

RELATOR_TOL = 1e-9
CERT_ITERATIONS = 16


def elements_equal(f: LineElement, g: LineElement, tol: float = RELATOR_TOL) -> bool:
    """Exact equality on PL, tolerance equality on floating backends.

    Lifts that differ by a deck translation are never equal.
    """
    if f.orientation is not g.orientation:
        return False
    if isinstance(f, PLZMap) and isinstance(g, PLZMap):
        return f == g
    if isinstance(f, MoebiusLift) and isinstance(g, MoebiusLift):
        return f.deck == g.deck and f.approx_equal(g, tol)
    if (isinstance(f, Conjugated) and isinstance(g, Conjugated)
            and f.conjugator == g.conjugator):
        return elements_equal(f.inner, g.inner, tol)
    grid = [k / 64 for k in range(64)]
    return all(abs(float(f.evaluate(x)) - float(g.evaluate(x))) <= tol * 10 for x in grid)


def is_identity_element(f: LineElement, tol: float = RELATOR_TOL) -> bool:
    if isinstance(f, MoebiusLift):
        return f.deck == 0 and f.is_projective_identity(tol)
    if isinstance(f, Conjugated):
        return is_identity_element(f.inner, tol)
    if isinstance(f, PLZMap):
        return f.is_identity()
    return elements_equal(f, f.identity_like(), tol)


def _fingerprint(f: LineElement):
    """Hashable bucket for duplicate detection; equal elements share a bucket
    except for rounding at bucket edges, which only costs a missed merge."""
    if isinstance(f, PLZMap):
        return f
    if isinstance(f, MoebiusLift):
        return ("m", f.deck, tuple(round(x, 7) for row in f.matrix for x in row))
    if isinstance(f, Conjugated):
        return ("c", f.conjugator, _fingerprint(f.inner))
    return ("g", f.orientation, tuple(round(float(f.evaluate(k / 8)), 7) for k in range(8)))


class Representation:
    """Generators mapped to line elements, plus the distinguished translation tau.

    ``center`` names a generator that must be mapped to ``tau``. Words are
    evaluated left to right as compositions: ``"a b"`` is ``a ∘ b``.
    """

    def __init__(self, generators: Mapping[str, LineElement], tau: LineElement,
                 relators: Iterable = (), center: Optional[str] = None,
                 name: str = "rep"):
        if not generators:
            raise ValidationError("a representation needs at least one generator")
        self.generators: Dict[str, LineElement] = dict(generators)
        self.tau = tau
        self.relators: Tuple[Word, ...] = tuple(as_word(r) for r in relators)
        self.center = center
        self.name = name
        self.alphabet = Alphabet(list(self.generators))
        if center is not None and center not in self.generators:
            raise ValidationError(f"center {center!r} is not a generator")
        self._inverses: Dict[str, LineElement] = {}

    # basic access ---------------------------------------------------------

    @property
    def names(self) -> Tuple[str, ...]:
        return self.alphabet.names

    @property
    def orientation_map(self) -> Dict[str, Orientation]:
        return {n: g.orientation for n, g in self.generators.items()}

    def is_orientable(self) -> bool:
        return all(o is Orientation.PRESERVING for o in self.orientation_map.values())

    def backend(self) -> str:
        kinds = {g.backend for g in self.generators.values()}
        return "pl" if kinds == {"pl"} else "moebius"

    def _gen_power(self, name: str, exp: int) -> LineElement:
        try:
            g = self.generators[name]
        except KeyError:
            raise UnboundWordError(f"generator {name!r} is not bound in {self.name}") from None
        if exp < 0:
            inv = self._inverses.get(name)
            if inv is None:
                inv = g.inverse()
                self._inverses[name] = inv
            g, exp = inv, -exp
        return g.power(exp) if exp != 1 else g

    def letter_element(self, name: str, sign: int) -> LineElement:
        """The element of the single letter ``name^sign``."""
        return self._gen_power(name, sign)

    def search_letters(self) -> List[Tuple[str, int]]:
        """Letters worth using in searches: translations act trivially mod 1."""
        out = []
        for letter in self.alphabet.letters:
            g = self.generators[letter[0]]
            if isinstance(g, PLZMap) and g.is_translation():
                continue
            if isinstance(g, MoebiusLift) and g.is_projective_identity():
                continue
            out.append(letter)
        return out

    def eval_word(self, w) -> LineElement:
        w = as_word(w)
        result: Optional[LineElement] = None
        for name, exp in w.syllables:
            p = self._gen_power(name, exp)
            result = p if result is None else result.compose(p)
        if result is None:
            return self.tau.identity_like()
        return result

    # derived representations ----------------------------------------------

    def replace(self, generators: Optional[Mapping[str, LineElement]] = None,
                tau: Optional[LineElement] = None, name: Optional[str] = None,
                relators=None) -> "Representation":
        return Representation(
            generators if generators is not None else self.generators,
            tau if tau is not None else self.tau,
            self.relators if relators is None else relators,
            self.center, name or self.name)

    def conjugate_by(self, h: PLZMap, name: Optional[str] = None) -> "Representation":
        """The representation ``g -> h ∘ g ∘ h^-1``."""
        gens = {n: Conjugated(h, g) for n, g in self.generators.items()}
        return self.replace(gens, Conjugated(h, self.tau), name or f"{self.name}^h")

    def with_generator(self, gen: str, element: LineElement) -> "Representation":
        gens = dict(self.generators)
        gens[gen] = element
        return self.replace(gens)

    # validation -----------------------------------------------------------

    def check_tau(self, tol: float = RELATOR_TOL) -> None:
        tau_inv = self.tau.inverse()
        for n, g in self.generators.items():
            lhs = self.tau.compose(g)
            rhs = g.compose(self.tau if g.orientation is Orientation.PRESERVING else tau_inv)
            if not elements_equal(lhs, rhs, tol):
                raise ValidationError(f"tau does not satisfy the twisted relation with {n}",
                                      Word.generator(n))
        if self.center is not None and not elements_equal(
                self.generators[self.center], self.tau, tol):
            raise ValidationError(f"center {self.center} is not mapped to tau",
                                  Word.generator(self.center))

    def check_relators(self, tol: float = RELATOR_TOL) -> None:
        for r in self.relators:
            if not is_identity_element(self.eval_word(r), tol):
                raise ValidationError(f"relator {r} does not evaluate to the identity", r)

    def check_hyperbolic_like(self, length: int) -> None:
        for w in self.alphabet.enumerate(length):
            e = self.eval_word(w)
            if e.orientation is Orientation.REVERSING:
                continue
            c = classify(e)
            if c is Classification.DEGENERATE:
                raise ValidationError(f"{w} has fixed points but is not hyperbolic-like", w)

    def validate(self, length: int = 3, tol: float = RELATOR_TOL) -> "Representation":
        self.check_tau(tol)
        self.check_relators(tol)
        self.check_hyperbolic_like(length)
        return self

    def is_abelian(self, tol: float = RELATOR_TOL) -> bool:
        gens = list(self.generators.values())
        for i, f in enumerate(gens):
            for g in gens[i + 1:]:
                if not elements_equal(f.compose(g), g.compose(f), tol):
                    return False
        return True

    def __repr__(self) -> str:
        return f"Representation({self.name!r}, generators={list(self.names)})"


# spectra ------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumEntry:
    key: Word
    has_fixed_points: bool
    certificate: TranslationInterval
    classification: Classification
    duplicate_of: Optional[Word] = None

    def to_json(self) -> dict:
        return {
            "key": str(self.key),
            "has_fixed_points": self.has_fixed_points,
            "classification": self.classification.value,
            "certificate": self.certificate.to_json(),
            "duplicate_of": None if self.duplicate_of is None else str(self.duplicate_of),
        }


@dataclass(frozen=True)
class Spectrum:
    length_bound: int
    oriented: bool
    entries: Tuple[SpectrumEntry, ...]
    _index: Dict[Word, SpectrumEntry] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._index.update({e.key: e for e in self.entries})

    def __getitem__(self, key) -> SpectrumEntry:
        return self._index[as_word(key)]

    def __contains__(self, key) -> bool:
        return as_word(key) in self._index

    def __len__(self) -> int:
        return len(self.entries)

    def with_fixed_points(self) -> List[Word]:
        return [e.key for e in self.entries if e.has_fixed_points]

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def _certificate(e: LineElement) -> Tuple[bool, TranslationInterval, Classification]:
    c = classify(e)
    if e.orientation is Orientation.REVERSING:
        zero = Fraction(0) if isinstance(e, PLZMap) else 0.0
        return True, TranslationInterval(zero, zero), c
    cert = translation_number(e, CERT_ITERATIONS)
    return c is not Classification.FIXED_POINT_FREE, cert, c


def spectrum(rep: Representation, L: int, oriented: bool = False,
             threads: Optional[int] = None) -> Spectrum:
    """Fixed-point existence for every conjugacy class of words of length <= L."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    keys = class_keys(rep.alphabet, L, oriented)

    def work(w):
        e = rep.eval_word(w)
        return e, _certificate(e)

    results = pmap(work, keys, threads)
    buckets: Dict[object, List[Tuple[Word, LineElement]]] = {}
    entries = []
    for w, (e, (has_fp, cert, cls)) in zip(keys, results):
        dup = None
        bucket = buckets.setdefault(_fingerprint(e), [])
        for other_w, other_e in bucket:
            if elements_equal(e, other_e):
                dup = other_w
                break
        if dup is None:
            bucket.append((w, e))
        entries.append(SpectrumEntry(w, has_fp, cert, cls, dup))
    return Spectrum(L, oriented, tuple(entries))


@dataclass(frozen=True)
class SpectrumComparison:
    equal: bool
    witness: Optional[Word]
    classes_checked: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"equal": self.equal,
                "witness_word": None if self.witness is None else str(self.witness),
                "classes_checked": self.classes_checked, "detail": self.detail}


def compare_spectra(rep1: Representation, rep2: Representation, L: int,
                    oriented: bool = False, threads: Optional[int] = None) -> SpectrumComparison:
    if rep1.names != rep2.names:
        raise PreconditionError(
            f"generator names differ: {list(rep1.names)} vs {list(rep2.names)}")
    s1 = spectrum(rep1, L, oriented, threads)
    s2 = spectrum(rep2, L, oriented, threads)
    for e1, e2 in zip(s1.entries, s2.entries):
        if e1.has_fixed_points != e2.has_fixed_points:
            side = "first" if e1.has_fixed_points else "second"
            return SpectrumComparison(False, e1.key, len(s1),
                                      f"{e1.key} has fixed points only in the {side} representation")
    return SpectrumComparison(True, None, len(s1))


# automorphisms --------------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    images: Mapping[str, Word]
    inverse_images: Optional[Mapping[str, Word]] = None

    def __post_init__(self):
        object.__setattr__(self, "images", {k: as_word(v) for k, v in self.images.items()})
        if self.inverse_images is not None:
            object.__setattr__(self, "inverse_images",
                               {k: as_word(v) for k, v in self.inverse_images.items()})

    @classmethod
    def identity(cls, names: Sequence[str]) -> "Automorphism":
        gens = {n: Word.generator(n) for n in names}
        return cls(gens, dict(gens))

    @classmethod
    def inner(cls, names: Sequence[str], w) -> "Automorphism":
        w = as_word(w)
        return cls({n: w * Word.generator(n) * w.inverse() for n in names},
                   {n: w.inverse() * Word.generator(n) * w for n in names})

    def apply(self, w) -> Word:
        return _substitute(as_word(w), self.images)

    def is_identity(self) -> bool:
        return all(v == Word.generator(k) for k, v in self.images.items())

    def check_bijective(self, names: Sequence[str]) -> None:
        """Check the inverse images undo the images on the length-2 ball."""
        if self.inverse_images is None:
            return
        for w in Alphabet(names).enumerate(2):
            back = _substitute(_substitute(w, self.images), self.inverse_images)
            if back != w:
                raise ValidationError(f"inverse images do not invert {w}", w)

    def to_json(self) -> dict:
        return {k: str(v) for k, v in self.images.items()}


def _substitute(w: Word, images: Mapping[str, Word]) -> Word:
    out = Word(())
    for name, exp in w.syllables:
        img = images.get(name, Word.generator(name))
        out = out * (img ** exp)
    return out


def apply_automorphism(rep: Representation, sigma: Automorphism,
                       tol: float = RELATOR_TOL) -> Representation:
    """The representation ``g -> rep(sigma(g))``."""
    sigma.check_bijective(rep.names)
    if sigma.is_identity():
        return rep
    gens = {n: rep.eval_word(sigma.images.get(n, Word.generator(n))) for n in rep.names}
    out = rep.replace(gens, name=f"{rep.name}∘σ")
    out.check_tau(tol)
    out.check_relators(tol)
    return out


def fiber_twist_automorphism(rep: Representation, phi: Mapping[str, int]) -> Automorphism:
    """``γ -> γ z^{φ(γ)}`` on generators, for a homomorphism ``φ`` to Z."""
    if rep.center is None:
        raise PreconditionError("fiber twist needs a designated center generator")
    z = rep.center
    unknown = set(phi) - set(rep.names)
    if unknown:
        raise ValidationError(f"phi mentions unknown generators {sorted(unknown)}")
    if phi.get(z, 0) != 0:
        raise ValidationError("phi must vanish on the center for the twist to be invertible")
    for r in rep.relators:
        total = sum(phi.get(n, 0) * e for n, e in r.syllables)
        if total != 0:
            raise ValidationError(f"phi is not a homomorphism: it sums to {total} on {r}", r)
    images = {n: Word.generator(n) * Word.generator(z, phi.get(n, 0)) for n in rep.names}
    inverse = {n: Word.generator(n) * Word.generator(z, -phi.get(n, 0)) for n in rep.names}
    return Automorphism(images, inverse)


# dynamics of single words ---------------------------------------------------

class OrbitVerdict(str, enum.Enum):
    BOUNDED_WITH_FIXED_POINT = "bounded_with_fixed_point"
    UNBOUNDED_NO_FIXED_POINT = "unbounded_no_fixed_point"


@dataclass(frozen=True)
class PeriodicOrbitResult:
    verdict: OrbitVerdict
    spread: float
    used_square: bool

    @property
    def bounded(self) -> bool:
        return self.verdict is OrbitVerdict.BOUNDED_WITH_FIXED_POINT


def periodic_orbit_criterion(rep: Representation, w, x=0, N: int = 64) -> PeriodicOrbitResult:
    """Decide whether the orbit of ``x`` under ``<γ>`` is bounded.

    An element with fixed points keeps every orbit inside one complementary
    interval of its fixed set, which has length below 1, while a fixed-point
    free element moves points by at least ``N|ρ| - 1`` after ``N`` steps. The
    orbit is declared bounded iff its spread over ``|n| <= N`` is below 1 and
    the verdict is cross-checked against the fixed-point solve.
    """
    w = as_word(w)
    g = rep.eval_word(w)
    used_square = g.orientation is Orientation.REVERSING
    if used_square:
        g = g.compose(g)
    g_inv = g.inverse()
    lo = hi = x
    fwd = bwd = x
    for _ in range(N):
        fwd = g.evaluate(fwd)
        bwd = g_inv.evaluate(bwd)
        lo, hi = min(lo, fwd, bwd), max(hi, fwd, bwd)
    spread = float(hi - lo)
    bounded = spread < 1
    if bounded != g.has_fixed_points():
        raise InconsistencyError(
            f"orbit of {x} under {w} has spread {spread} but the fixed-point solve "
            f"says {'some' if g.has_fixed_points() else 'none'}")
    verdict = (OrbitVerdict.BOUNDED_WITH_FIXED_POINT if bounded
               else OrbitVerdict.UNBOUNDED_NO_FIXED_POINT)
    return PeriodicOrbitResult(verdict, spread, used_square)


@dataclass(frozen=True)
class MinimalityResult:
    passed: bool
    max_gap: float
    uncovered: Optional[Tuple[float, float]]
    orbit_size: int


def check_minimality_heuristic(rep: Representation, L: int, eps) -> MinimalityResult:
    """Is the orbit of 0 under words of length <= L eps-dense in [0, 1)?"""
    exact = rep.backend() == "pl"
    letters = [rep.letter_element(n, s) for n, s in rep.alphabet.letters]

    def norm(p):
        p = p - math.floor(p)
        return p if exact else round(float(p), 12) % 1.0

    seen = {norm(Fraction(0) if exact else 0.0)}
    frontier = set(seen)
    for _ in range(L):
        nxt = set()
        for p in frontier:
            for g in letters:
                q = norm(g.evaluate(p))
                if q not in seen:
                    nxt.add(q)
        seen |= nxt
        frontier = nxt
        if not frontier:
            break
    pts = sorted(seen)
    gaps = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)] + [(pts[-1], pts[0] + 1)]
    lo, hi = max(gaps, key=lambda ab: ab[1] - ab[0])
    gap = float(hi - lo)
    passed = gap <= 2 * float(eps)
    return MinimalityResult(passed, gap, None if passed else (float(lo), float(hi)), len(pts))
