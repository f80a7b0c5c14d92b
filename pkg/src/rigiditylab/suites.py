"""Seeded randomized checks of the linking and density statements.

Each suite returns a :class:`SuiteResult` with counts and the first
counterexample, if any. All randomness comes from ``random.Random(seed)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import BudgetExhaustedError, InconsistencyError, RigidityError
from .linking import (
    detect_ordering_via_words,
    find_element_near,
    find_element_with_pair,
    find_unlinked_witness,
    linked,
    ordering_type,
    scan_words_fixed,
)
from .models import UNLINKED_PATTERNS, random_linked_pair, random_unlinked_pair
from .reps import Representation
from .serialize import element_to_json
from .zhomeo import circle_distance, is_hyperbolic_like


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexample: Optional[dict] = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    def fail(self, detail: dict) -> None:
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = detail

    def to_json(self) -> dict:
        return {"suite": self.name, "verdict": "pass" if self.passed else "fail",
                "cases": self.cases, "failures": self.failures,
                "counterexample": self.counterexample, "notes": self.notes}


def _pair_json(a, b) -> dict:
    return {"a": element_to_json(a), "b": element_to_json(b)}


def linked_suite(pairs: int, seed: int, scan_N: int = 5) -> SuiteResult:
    """Linked pairs have fixed points for every a^n b^m on the scan box;
    unlinked pairs get a fixed-point-free witness word."""
    rng = random.Random(seed)
    res = SuiteResult("linked")
    n_linked = 0
    for i in range(pairs):
        want_linked = i % 2 == 0
        a, b = random_linked_pair(rng) if want_linked else random_unlinked_pair(rng)
        res.cases += 1
        verdict = linked(a, b)
        if verdict.counts_as_linked != want_linked:
            res.fail({"case": i, "reason": f"expected linked={want_linked}, got {verdict.value}",
                      **_pair_json(a, b)})
            continue
        if verdict.counts_as_linked:
            n_linked += 1
            scan = scan_words_fixed(a, b, scan_N)
            bad = sorted(k for k, v in scan.items() if not v)
            if bad:
                res.fail({"case": i, "reason": "linked pair with a fixed-point-free word",
                          "word": f"a^{bad[0][0]} b^{bad[0][1]}", **_pair_json(a, b)})
        else:
            w = find_unlinked_witness(a, b)
            if w is None or not w.certificate.excludes_zero():
                res.fail({"case": i, "reason": "no fixed-point-free witness",
                          **_pair_json(a, b)})
    res.notes = {"linked_pairs": n_linked, "unlinked_pairs": res.cases - n_linked,
                 "scan_box": scan_N}
    return res


def unlinked_suite(pairs: int, seed: int, N_max: int = 20) -> SuiteResult:
    """The word test reads the same ordering class as the fixed points,
    for each pair and for the pair of inverses."""
    rng = random.Random(seed)
    res = SuiteResult("unlinked")
    for i in range(pairs):
        pattern = UNLINKED_PATTERNS[i % len(UNLINKED_PATTERNS)]
        a, b = random_unlinked_pair(rng, pattern)
        for label, (x, y) in (("pair", (a, b)), ("inverses", (a.inverse(), b.inverse()))):
            res.cases += 1
            try:
                if label == "pair" and ordering_type(x, y).pattern != pattern:
                    raise InconsistencyError(f"generated pattern {pattern} not recovered")
                det = detect_ordering_via_words(x, y, N_max)
                if det.matches_lemma_pattern != ordering_type(x, y).matches_lemma:
                    raise InconsistencyError("word test disagrees with the ordering")
            except RigidityError as exc:
                res.fail({"case": i, "variant": label, "reason": str(exc), **_pair_json(x, y)})
    res.notes = {"N_max": N_max}
    return res


def _targets(rng: random.Random, count: int) -> List[float]:
    return [rng.randrange(10 ** 6) / 10 ** 6 for _ in range(count)]


def dense_suite(rep: Representation, targets: int, seed: int, eps: float = 1e-3,
                budget: int = 8) -> SuiteResult:
    """Each target point gets a word with both fixed points within eps,
    confirmed by solving for the fixed points of the returned word again."""
    rng = random.Random(seed)
    res = SuiteResult("dense")
    for i, x in enumerate(_targets(rng, targets)):
        res.cases += 1
        try:
            found = find_element_near(rep, x, eps, budget)
        except BudgetExhaustedError as exc:
            res.fail({"case": i, "target": x, "reason": str(exc)})
            continue
        e = rep.eval_word(found.word)
        fps = e.fixed_points()
        ok = is_hyperbolic_like(e) and all(
            circle_distance(p.location, x) + p.radius <= eps for p in fps)
        if not ok:
            res.fail({"case": i, "target": x, "word": str(found.word),
                      "reason": "fixed points not within eps"})
    res.notes = {"eps": eps, "model": rep.name}
    return res


def pairs_dense_suite(rep: Representation, targets: int, seed: int, eps: float = 1e-3,
                      budget: int = 8) -> SuiteResult:
    """Each target pair (x, y) gets a word repelling near x and attracting near y."""
    rng = random.Random(seed)
    res = SuiteResult("pairs_dense")
    i = 0
    while res.cases < targets:
        x, y = _targets(rng, 2)
        if circle_distance(x, y) <= 4 * eps:
            continue
        res.cases += 1
        try:
            found = find_element_with_pair(rep, x, y, eps, budget)
        except BudgetExhaustedError as exc:
            res.fail({"case": i, "target": [x, y], "reason": str(exc)})
            i += 1
            continue
        e = rep.eval_word(found.word)
        fps = e.fixed_points()
        ok = (is_hyperbolic_like(e)
              and circle_distance(fps.repelling[0].location, x) + fps.repelling[0].radius <= eps
              and circle_distance(fps.attracting[0].location, y) + fps.attracting[0].radius <= eps)
        if not ok:
            res.fail({"case": i, "target": [x, y], "word": str(found.word),
                      "reason": "fixed points not within eps"})
        i += 1
    res.notes = {"eps": eps, "model": rep.name}
    return res


__all__ = ["SuiteResult", "linked_suite", "unlinked_suite", "dense_suite",
           "pairs_dense_suite"]
