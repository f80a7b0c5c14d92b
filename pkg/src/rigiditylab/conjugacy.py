"""Building a conjugating map between two representations with equal spectra.

The map pairs the attracting fixed point of each sampled word under the first
representation with the attracting fixed point of the same word under the
second, after moving a base element's attracting points to the integers on
both sides. Between samples it interpolates linearly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InconsistencyError, NotHyperbolicLikeError, PreconditionError
from .linking import (
    LinkingVerdict,
    detect_ordering_via_words,
    linked,
    ordering_type,
)
from .reps import Representation, compare_spectra
from .words import Word, as_word
from .zhomeo import (
    LineElement,
    Orientation,
    PLZMap,
    frac_part,
    is_hyperbolic_like,
)

DEFAULT_GRID = 256
FLOAT_TOL = 1e-9


class ConjugacyStatus(str, enum.Enum):
    CONJUGATE = "conjugate"
    MISMATCH = "mismatch"
    ORDER_VIOLATION = "order_violation"


@dataclass(frozen=True)
class Sample:
    word: Word
    source: object
    target: object

    def to_json(self) -> dict:
        return {"word": str(self.word), "source": _num_json(self.source),
                "target": _num_json(self.target)}


def _num_json(v):
    if isinstance(v, Fraction):
        return [str(v.numerator), str(v.denominator)]
    return float(v)


@dataclass
class ConjugacyResult:
    status: ConjugacyStatus
    theta: Optional[PLZMap] = None
    sample_pairs: List[Sample] = field(default_factory=list)
    defect: Optional[float] = None
    gap_bound: Optional[float] = None
    orientation_sign: int = 1
    base_word: Optional[Word] = None
    witness: Optional[Tuple[Word, ...]] = None
    detail: str = ""

    @property
    def is_conjugate(self) -> bool:
        return self.status is ConjugacyStatus.CONJUGATE

    def to_json(self) -> dict:
        from .serialize import element_to_json
        return {
            "status": self.status.value,
            "orientation_sign": self.orientation_sign,
            "base_word": None if self.base_word is None else str(self.base_word),
            "witness": None if self.witness is None else [str(w) for w in self.witness],
            "defect": self.defect,
            "gap_bound": self.gap_bound,
            "theta": None if self.theta is None else element_to_json(self.theta),
            "samples": [s.to_json() for s in self.sample_pairs],
            "detail": self.detail,
        }


# coordinates and orientation ---------------------------------------------------

def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _attracting(f: LineElement, what: str):
    if not is_hyperbolic_like(f):
        raise NotHyperbolicLikeError(f"{what} is not hyperbolic-like")
    return f.fixed_points().attracting[0].location


def normalize_coordinates(rep: Representation, g_word) -> PLZMap:
    """Translation c with c(g+ + k) = k, so conjugating by c puts Fix+(g) on Z."""
    g_plus = _attracting(rep.eval_word(as_word(g_word)), str(g_word))
    return PLZMap.translation(-_exact(g_plus))


def base_word(rep: Representation, candidates: Optional[Sequence[Word]] = None) -> Word:
    """Shortlex-least hyperbolic-like word among ``candidates`` (default: generators)."""
    if candidates is None:
        candidates = [Word.generator(n) for n in rep.names]
    for w in candidates:
        if is_hyperbolic_like(rep.eval_word(w)):
            return w
    raise PreconditionError("no hyperbolic-like base element")


def _sample_words(rep: Representation, L: int) -> List[Word]:
    # words through the center only shift a word's lift by a deck translation,
    # so they carry no new attracting points
    names = [n for n in rep.names if n != rep.center]
    from .words import Alphabet
    return list(Alphabet(names).enumerate(L))


@dataclass(frozen=True)
class OrientationPin:
    sign: int
    f_word: Word
    g_word: Word


def pin_orientation(rep1: Representation, rep2: Representation, g_word, budget: int = 4,
                    candidates: Optional[Sequence[Word]] = None,
                    n_max: int = 20) -> OrientationPin:
    """Decide whether the conjugacy must preserve (+1) or reverse (-1) orientation.

    Finds ``f`` unlinked with ``g`` in ``rep1`` and replaces ``g`` and ``f``
    by inverses as needed to reach the ordering ``(g+, g-, f-, f+)``. The word
    test then confirms the pair still has a lemma ordering in ``rep2``, and
    which of the two lemma orderings it is gives the sign.
    """
    g_word = as_word(g_word)
    g1 = rep1.eval_word(g_word)
    if candidates is None:
        candidates = _sample_words(rep1, budget)
    flips = {
        ("a+", "a-", "b-", "b+"): (1, 1),
        ("a+", "a-", "b+", "b-"): (1, -1),
        ("a+", "b-", "b+", "a-"): (-1, 1),
        ("a+", "b+", "b-", "a-"): (-1, -1),
    }
    for f_word in candidates:
        f1 = rep1.eval_word(f_word)
        if not is_hyperbolic_like(f1) or linked(g1, f1) is not LinkingVerdict.UNLINKED:
            continue
        eg, ef = flips[ordering_type(g1, f1).pattern]
        gw, fw = g_word ** eg, f_word ** ef
        g2, f2 = rep2.eval_word(gw), rep2.eval_word(fw)
        if (not is_hyperbolic_like(g2) or not is_hyperbolic_like(f2)
                or linked(g2, f2) is not LinkingVerdict.UNLINKED):
            raise PreconditionError(
                f"{fw} is unlinked with {gw} in the first representation only")
        det = detect_ordering_via_words(g2, f2, n_max)
        if not det.matches_lemma_pattern:
            raise PreconditionError(
                f"b^N a^N loses fixed points at N = {det.witness_N} in the second representation")
        sign = 1 if det.ordering.pattern == ("a+", "a-", "b-", "b+") else -1
        return OrientationPin(sign, fw, gw)
    raise PreconditionError("no element unlinked with the base element within budget")


# synthesis --------------------------------------------------------------------

def _reflect_rep(rep: Representation) -> Representation:
    iota = PLZMap.reflection(0)
    return rep.conjugate_by(iota, name=f"ι{rep.name}ι")


def _synthesize(rep1: Representation, rep2: Representation, words: Sequence[Word],
                g_word: Word, sign: int, grid_size: int,
                generators: Optional[Sequence[str]] = None) -> ConjugacyResult:
    target = rep2 if sign > 0 else _reflect_rep(rep2)
    exact = rep1.backend() == "pl" and target.backend() == "pl"
    g1p = _exact(_attracting(rep1.eval_word(g_word), str(g_word)))
    g2p = _exact(_attracting(target.eval_word(g_word), str(g_word)))
    samples = []
    for w in words:
        e1 = rep1.eval_word(w)
        if e1.orientation is not Orientation.PRESERVING or not is_hyperbolic_like(e1):
            continue
        e2 = target.eval_word(w)
        if not is_hyperbolic_like(e2):
            return ConjugacyResult(ConjugacyStatus.MISMATCH, witness=(w,), orientation_sign=sign,
                                   base_word=g_word,
                                   detail=f"{w} is hyperbolic-like only in the first representation")
        a1, a2 = e1.fixed_points().attracting[0], e2.fixed_points().attracting[0]
        p, q = _exact(a1.location), _exact(a2.location)
        samples.append((frac_part(p - g1p), frac_part(q - g2p), w, p, q, a1.radius, a2.radius))
    samples.sort(key=lambda s: s[0])
    # points closer than their certified radii are the same point; anything
    # else must appear in the same order on both sides. With floating-point
    # radii, overlap on one side only leaves the order undecided rather than
    # violated, so such a sample is set aside
    merged = []
    undecided = 0
    for s in samples:
        if merged:
            prev = merged[-1]
            same_u = s[0] - prev[0] <= s[5] + prev[5]
            same_v = abs(s[1] - prev[1]) <= s[6] + prev[6]
            if same_u and same_v:
                continue
            if (same_u or same_v) and not exact:
                undecided += 1
                continue
            if same_u or same_v:
                return ConjugacyResult(ConjugacyStatus.ORDER_VIOLATION, witness=(prev[2], s[2]),
                                       orientation_sign=sign, base_word=g_word,
                                       detail=f"{prev[2]} and {s[2]} share a fixed point on one side only")
            if s[1] < prev[1]:
                return ConjugacyResult(ConjugacyStatus.ORDER_VIOLATION, witness=(prev[2], s[2]),
                                       orientation_sign=sign, base_word=g_word,
                                       detail=f"{prev[2]} and {s[2]} appear in opposite orders")
        merged.append(s)
    # theta(x) = Theta(x - g1+) + g2+ for the normalized interpolant Theta
    theta = PLZMap([(s[0] + g1p, s[1] + g2p) for s in merged])
    if sign < 0:
        theta = PLZMap.reflection(0).compose(theta)
    gens = list(generators) if generators is not None else list(rep1.names)
    bound = interpolation_gap_bound(rep2, theta, [s[3] for s in merged], gens) + (0 if exact else FLOAT_TOL)
    defect = verify_conjugacy(rep1, rep2, theta, grid_size, gens)
    pairs = [Sample(s[2], s[3], theta.evaluate(s[3])) for s in merged]
    detail = f"{undecided} samples with undecided order set aside" if undecided else ""
    return ConjugacyResult(ConjugacyStatus.CONJUGATE, theta, pairs, defect, bound, sign, g_word,
                           detail=detail)


def synthesize_conjugacy(rep1: Representation, rep2: Representation, L: int,
                         oriented: bool = False, grid_size: int = DEFAULT_GRID,
                         orientation_sign: Optional[int] = None,
                         threads: Optional[int] = None) -> ConjugacyResult:
    """Conjugating map ``theta`` with ``theta ∘ rep1(s) = rep2(s) ∘ theta``.

    ``orientation_sign`` skips orientation pinning when given.
    """
    cmp = compare_spectra(rep1, rep2, L, oriented, threads)
    if not cmp.equal:
        return ConjugacyResult(ConjugacyStatus.MISMATCH, witness=(cmp.witness,), detail=cmp.detail)
    words = _sample_words(rep1, L)
    g_word = base_word(rep1)
    if orientation_sign is None:
        orientation_sign = pin_orientation(rep1, rep2, g_word, budget=min(L, 4)).sign
    return _synthesize(rep1, rep2, words, g_word, orientation_sign, grid_size)


def verify_conjugacy(rep1: Representation, rep2: Representation, theta: PLZMap,
                     grid_size: int = DEFAULT_GRID,
                     generators: Optional[Sequence[str]] = None) -> float:
    """max over generators s and grid x of |theta(rep1(s)(x)) - rep2(s)(theta(x))|."""
    gens = list(generators) if generators is not None else list(rep1.names)
    worst = 0.0
    for n in gens:
        s1, s2 = rep1.eval_word(Word.generator(n)), rep2.eval_word(Word.generator(n))
        for k in range(grid_size):
            x = Fraction(k, grid_size) if isinstance(s1, PLZMap) else k / grid_size
            d = abs(float(theta.evaluate(s1.evaluate(x)) - s2.evaluate(theta.evaluate(x))))
            worst = max(worst, d)
    return worst


def interpolation_gap_bound(rep2: Representation, theta: PLZMap, sources: Sequence,
                            generators: Sequence[str]) -> float:
    """Defect bound for a monotone interpolant that is exact at ``sources``.

    Any conjugator agreeing with ``theta`` at the samples differs from it by
    at most the largest target gap, and moving the argument of ``rep2(s)``
    within one gap moves its value by at most the largest image gap.
    """
    pts = sorted(float(theta.evaluate(p)) for p in sources)
    base = pts[0]
    pts = sorted(base + (v - base) % 1.0 for v in pts) + [base + 1.0]
    gap = max(b - a for a, b in zip(pts, pts[1:]))
    worst = 0.0
    for n in generators:
        s = rep2.eval_word(Word.generator(n))
        imgs = [float(s.evaluate(v)) for v in pts]
        worst = max(worst, max(abs(b - a) for a, b in zip(imgs, imgs[1:])))
    return gap + worst


# non-orientable bookkeeping -------------------------------------------------------

class ReconcileVerdict(str, enum.Enum):
    CONJUGATE = "conjugate"
    RESIDUAL = "residual"
    MISMATCH = "mismatch"


@dataclass
class TranslationLedger:
    offsets: Dict[str, int]
    base_reversing: Optional[str]
    base_offset: Optional[int]
    shift: int

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.offsets.values())

    def to_json(self) -> dict:
        return {"offsets": dict(self.offsets), "base_reversing": self.base_reversing,
                "base_offset": self.base_offset, "shift": self.shift}


@dataclass
class ReconcileResult:
    verdict: ReconcileVerdict
    ledger: Optional[TranslationLedger]
    conjugacy: Optional[ConjugacyResult]
    residual_generator: Optional[str] = None
    witness: Optional[Word] = None
    detail: str = ""

    @property
    def flagged(self) -> bool:
        return self.verdict is not ReconcileVerdict.CONJUGATE

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value,
                "ledger": None if self.ledger is None else self.ledger.to_json(),
                "residual_generator": self.residual_generator,
                "witness_word": None if self.witness is None else str(self.witness),
                "conjugacy": None if self.conjugacy is None else self.conjugacy.to_json(),
                "detail": self.detail}


def _cyclic_sign(a, b, c) -> int:
    """+1 if a -> b -> c runs in the positive direction around R/Z, else -1."""
    a, b, c = (float(frac_part(v)) for v in (a, b, c))
    return 1 if ((b - a) % 1.0) < ((c - a) % 1.0) else -1


def orientation_via_triples(rep: Representation, gen: str,
                            triple: Sequence[Word]) -> int:
    """Whether ``gen`` keeps the cyclic order of three attracting points.

    Uses only fixed points: the attracting point of ``γ h γ^-1`` is ``γ(h+)``.
    """
    g = Word.generator(gen)
    before = [_attracting(rep.eval_word(h), str(h)) for h in triple]
    after = [_attracting(rep.eval_word(g * h * g.inverse()), str(h)) for h in triple]
    return _cyclic_sign(*before) * _cyclic_sign(*after)


def _triple(rep: Representation, words: Sequence[Word]) -> List[Word]:
    out, pts = [], []
    for w in words:
        e = rep.eval_word(w)
        if e.orientation is not Orientation.PRESERVING or not is_hyperbolic_like(e):
            continue
        p = e.fixed_points().attracting[0].location
        if all(abs(float(p) - float(q)) > 1e-6 for q in pts):
            out.append(w)
            pts.append(p)
        if len(out) == 3:
            return out
    raise PreconditionError("fewer than three distinct attracting points")


def squares_subgroup_words(rep: Representation, L: int) -> List[Word]:
    """Squares of words of length <= ceil(L/2) and their pairwise products up to length L."""
    names = [n for n in rep.names if n != rep.center]
    from .words import Alphabet
    alphabet = Alphabet(names)
    squares = []
    seen = set()
    for w in alphabet.enumerate((L + 1) // 2):
        s = w * w
        if s not in seen and not s.is_empty():
            seen.add(s)
            squares.append(s)
    out = list(squares)
    for u in squares:
        for v in squares:
            p = u * v
            if 0 < len(p) <= L and p not in seen:
                seen.add(p)
                out.append(p)
    out.sort(key=alphabet.key)
    return out


def _integer_offset(x, what: str) -> int:
    k = round(float(x))
    if abs(float(x) - k) > 1e-6:
        raise InconsistencyError(f"offset {float(x)} for {what} is not an integer")
    return k


def reconcile_nonorientable(rep1: Representation, rep2: Representation, L: int,
                            grid_size: int = DEFAULT_GRID) -> ReconcileResult:
    """Conjugacy for representations with orientation-reversing generators.

    Synthesizes ``theta`` on the squares subgroup, then measures for each
    generator γ the integer ``T_γ`` with ``theta ρ1(γ) theta^-1 = ρ2(γ) ∘ T_γ``.
    Orientation-preserving generators must give 0; one reversing generator
    γ0 is aligned by post-composing ``theta`` with an integer translation,
    after which every generator must give 0.
    """
    if rep1.names != rep2.names:
        raise PreconditionError("generator names differ")
    words = squares_subgroup_words(rep1, L)
    triple = _triple(rep1, words)
    gens = [n for n in rep1.names if n != rep1.center]
    probes = list(triple) + [Word.generator(n) * h * Word.generator(n, -1)
                             for n in gens for h in triple]
    for h in probes:
        if not is_hyperbolic_like(rep2.eval_word(h)):
            names = h.names()
            return ReconcileResult(ReconcileVerdict.MISMATCH, None, None,
                                   next(iter(names)) if len(names) == 1 else None, h,
                                   f"{h} is hyperbolic-like in the first representation only")
    for n in gens:
        s1 = orientation_via_triples(rep1, n, triple)
        s2 = orientation_via_triples(rep2, n, triple)
        if s1 != s2:
            return ReconcileResult(ReconcileVerdict.MISMATCH, None, None, n, Word.generator(n),
                                   f"{n} reverses the cyclic order in one representation only")
    for w in words:
        if rep1.eval_word(w).has_fixed_points() != rep2.eval_word(w).has_fixed_points():
            gen = w.syllables[0][0]
            return ReconcileResult(ReconcileVerdict.MISMATCH, None, None, gen, w,
                                   f"squares-subgroup spectra differ at {w}")
    g_word = base_word(rep1, words)
    sign = pin_orientation(rep1, rep2, g_word, candidates=words).sign
    # attracting points of γ g γ^-1 are ρ1(γ)(g+); sampling them makes theta
    # exact where the offsets below are read. An integer offset of ρ2(γ)
    # commutes with ρ2(g), so these pairs are correct whatever the offset.
    anchors = [Word.generator(n) * g_word * Word.generator(n, -1)
               for n in rep1.names if n != rep1.center]
    res = _synthesize(rep1, rep2, list(words) + anchors, g_word, sign, grid_size,
                      generators=[])
    if not res.is_conjugate:
        return ReconcileResult(ReconcileVerdict.MISMATCH, None, res, None,
                               res.witness[0] if res.witness else None, res.detail)
    theta = res.theta
    p = _exact(_attracting(rep1.eval_word(g_word), str(g_word)))

    def offset(n: str, th: PLZMap) -> int:
        s1, s2 = rep1.generators[n], rep2.generators[n]
        x = s1.evaluate(p) if isinstance(s1, PLZMap) else float(s1.evaluate(float(p)))
        # theta(ρ1(γ) p) - ρ2(γ)(theta p), with sign flips when theta reverses
        return _integer_offset(th.evaluate(x) - s2.evaluate(th.evaluate(p)), n)

    offsets = {n: offset(n, theta) for n in rep1.names}
    reversing = [n for n in rep1.names if rep1.generators[n].orientation is Orientation.REVERSING]
    gamma0 = reversing[0] if reversing else None
    base_off = offsets[gamma0] if gamma0 else None
    shift = 0
    if gamma0 is not None and base_off % 2 == 0:
        # reversing ρ2(γ0) turns a shift c of theta into an offset change of 2c
        shift = -base_off // 2
        theta = PLZMap.translation(shift).compose(theta)
        offsets = {n: offset(n, theta) for n in rep1.names}
    ledger = TranslationLedger(offsets, gamma0, base_off, shift)
    res.theta = theta
    res.defect = verify_conjugacy(rep1, rep2, theta, grid_size)
    res.gap_bound = interpolation_gap_bound(rep2, theta, [s.source for s in res.sample_pairs],
                                            list(rep1.names))
    res.sample_pairs = [Sample(s.word, s.source, theta.evaluate(s.source)) for s in res.sample_pairs]
    bad = [n for n in rep1.names if offsets[n] != 0]
    if bad:
        return ReconcileResult(ReconcileVerdict.RESIDUAL, ledger, res, bad[0], Word.generator(bad[0]),
                               f"nonzero translation residual for {', '.join(bad)}")
    return ReconcileResult(ReconcileVerdict.CONJUGATE, ledger, res)
