import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import pl_eval
from rigiditylab.conjugacy import (
    ConjugacyStatus,
    ReconcileVerdict,
    normalize_coordinates,
    pin_orientation,
    reconcile_nonorientable,
    squares_subgroup_words,
    synthesize_conjugacy,
    verify_conjugacy,
)
from rigiditylab.errors import NotHyperbolicLikeError, PreconditionError
from rigiditylab.models import (
    geodesic_genus2,
    hyperbolic_map,
    random_conjugator,
    random_pl,
    random_pl_twisted,
)
from rigiditylab.reps import Representation
from rigiditylab.words import Alphabet, Word
from rigiditylab.zhomeo import Orientation, PLZMap

T1 = PLZMap.translation(1)


@pytest.fixture(scope="module")
def rep():
    return random_pl(2, 0)


# normalize_coordinates ----------------------------------------------------------

def test_normalize_when_attractor_is_zero():
    r = Representation({"g": hyperbolic_map(F(1, 2), F(0))}, T1)
    assert normalize_coordinates(r, "g").evaluate(0) == 0


def test_normalize_is_a_translation():
    r = Representation({"g": hyperbolic_map(F(5, 6), F(1, 3))}, T1)
    c = normalize_coordinates(r, "g")
    assert c == PLZMap.translation(F(-1, 3))
    moved = r.conjugate_by(c).eval_word("g").fixed_points()
    assert moved.attracting[0].location == 0


def test_normalize_rejects_translation():
    r = Representation({"g": PLZMap.translation(F(1, 3))}, T1)
    with pytest.raises(NotHyperbolicLikeError):
        normalize_coordinates(r, "g")


# pin_orientation -----------------------------------------------------------------

def test_pin_against_itself(rep):
    assert pin_orientation(rep, rep, "a").sign == 1


def test_pin_flips_for_reversed_conjugate(rep):
    h = random_conjugator(random.Random(4), orientation=Orientation.REVERSING)
    assert pin_orientation(rep, rep.conjugate_by(h), "a").sign == -1


def test_pin_fails_on_abelian_rep():
    a = hyperbolic_map(F(0), F(1, 2))
    r = Representation({"a": a, "b": a.power(2), "z": T1}, T1, center="z")
    with pytest.raises(PreconditionError):
        pin_orientation(r, r, "a")


# synthesize_conjugacy --------------------------------------------------------------

def test_synthesize_against_itself(rep):
    res = synthesize_conjugacy(rep, rep, 4)
    assert res.is_conjugate and res.defect == 0
    assert all(s.source == s.target for s in res.sample_pairs)
    for k in range(16):
        assert res.theta.evaluate(F(k, 16)) == F(k, 16)


@pytest.mark.parametrize("seed", [1, 2])
def test_synthesize_recovers_known_conjugator(rep, seed):
    h = random_conjugator(random.Random(seed))
    other = rep.conjugate_by(h)
    res = synthesize_conjugacy(rep, other, 4)
    assert res.is_conjugate and res.orientation_sign == 1
    # theta and h agree at every sample up to one common deck translation
    offsets = {pl_eval(h.breakpoints, s.source) - s.target for s in res.sample_pairs}
    assert len(offsets) == 1 and next(iter(offsets)).denominator == 1
    for s in res.sample_pairs:
        fps = other.eval_word(s.word).fixed_points()
        assert s.target % 1 in [p.location for p in fps.attracting]
    assert res.defect <= res.gap_bound


def test_synthesize_recovers_reversing_conjugator(rep):
    h = random_conjugator(random.Random(9), orientation=Orientation.REVERSING)
    res = synthesize_conjugacy(rep, rep.conjugate_by(h), 4)
    assert res.is_conjugate and res.orientation_sign == -1
    assert res.theta.orientation is Orientation.REVERSING
    assert res.defect <= res.gap_bound


def test_synthesize_on_moebius_model():
    g = geodesic_genus2()
    h = random_conjugator(random.Random(3))
    res = synthesize_conjugacy(g, g.conjugate_by(h), 4)
    assert res.is_conjugate and res.defect <= res.gap_bound


def test_shifted_generator_is_a_mismatch(rep):
    other = rep.with_generator("a", rep.generators["a"].compose(T1))
    res = synthesize_conjugacy(rep, other, 3)
    assert res.status is ConjugacyStatus.MISMATCH
    assert len(res.witness) == 1 and len(res.witness[0]) == 1


def test_theta_has_periodic_closure(rep):
    res = synthesize_conjugacy(rep, rep.conjugate_by(random_conjugator(random.Random(5))), 3)
    for k in range(32):
        x = F(k, 32)
        assert res.theta.evaluate(x + 1) == res.theta.evaluate(x) + 1


def test_result_json_carries_theta_and_samples(rep):
    doc = synthesize_conjugacy(rep, rep, 3).to_json()
    assert doc["status"] == "conjugate" and doc["theta"]["backend"] == "pl"
    assert doc["samples"] and {"word", "source", "target"} <= set(doc["samples"][0])


# verify_conjugacy ---------------------------------------------------------------------

def test_verify_identity_is_zero(rep):
    assert verify_conjugacy(rep, rep, PLZMap.identity()) == 0


def test_verify_unrelated_theta_on_builtins(rep):
    theta = PLZMap([(0, 0), (F(1, 3), F(1, 2))])
    assert verify_conjugacy(rep, rep, theta) > 0.01
    g = geodesic_genus2()
    assert verify_conjugacy(g, g, theta) > 0.01


def test_verify_known_conjugator_is_zero(rep):
    h = random_conjugator(random.Random(8))
    assert verify_conjugacy(rep, rep.conjugate_by(h), h) == 0


# reconcile_nonorientable ----------------------------------------------------------------

@pytest.fixture(scope="module")
def twisted():
    return random_pl_twisted(2, 0)


def test_squares_subgroup_words_are_even(twisted):
    for w in squares_subgroup_words(twisted, 4):
        assert 0 < len(w) <= 4
        assert twisted.eval_word(w).orientation is Orientation.PRESERVING


def test_reconcile_with_itself(twisted):
    res = reconcile_nonorientable(twisted, twisted, 4)
    assert res.verdict is ReconcileVerdict.CONJUGATE and res.ledger.is_zero()
    assert res.ledger.base_reversing == "r"


@pytest.mark.parametrize("k", [1, -2])
def test_reconcile_absorbs_integer_shift(twisted, k):
    shifted = twisted.conjugate_by(PLZMap.translation(k))
    res = reconcile_nonorientable(twisted, shifted, 4)
    assert res.verdict is ReconcileVerdict.CONJUGATE and res.ledger.is_zero()
    assert res.conjugacy.defect == 0


def test_reconcile_recovers_conjugate(twisted):
    h = random_conjugator(random.Random(12))
    res = reconcile_nonorientable(twisted, twisted.conjugate_by(h), 4)
    assert res.verdict is ReconcileVerdict.CONJUGATE and res.ledger.is_zero()
    assert res.conjugacy.defect <= res.conjugacy.gap_bound


def test_reconcile_flags_orientation_disagreement(twisted):
    other = twisted.with_generator("r", PLZMap.identity())
    res = reconcile_nonorientable(twisted, other, 4)
    assert res.verdict is ReconcileVerdict.MISMATCH and res.residual_generator == "r"


def test_reconcile_flags_translated_reversing_generator(twisted):
    other = twisted.with_generator("r", twisted.generators["r"].compose(T1))
    res = reconcile_nonorientable(twisted, other, 4)
    assert res.flagged


def _offset(rep1, rep2, w, x):
    return rep1.eval_word(w).evaluate(x) - rep2.eval_word(w).evaluate(x)


@settings(max_examples=30)
@given(st.integers(-2, 2), st.integers(-2, 2),
       st.lists(st.sampled_from(["a", "a^-1", "b", "b^-1"]), min_size=1, max_size=4),
       st.lists(st.sampled_from(["a", "a^-1", "b", "b^-1"]), min_size=1, max_size=4))
def test_translation_offsets_are_additive(ka, kb, u, v):
    rep1 = random_pl(2, 0)
    rep2 = rep1.replace({"a": rep1.generators["a"].compose(PLZMap.translation(-ka)),
                         "b": rep1.generators["b"].compose(PLZMap.translation(-kb)),
                         "z": T1})
    wu, wv = Word.parse(" ".join(u)), Word.parse(" ".join(v))
    x = F(1, 7)
    tu, tv = _offset(rep1, rep2, wu, x), _offset(rep1, rep2, wv, x)
    assert _offset(rep1, rep2, wu * wv, x) == tu + tv
    assert tu == sum(e * (ka if n == "a" else kb) for n, e in wu.syllables)


def test_squares_words_cover_short_squares(twisted):
    words = set(squares_subgroup_words(twisted, 4))
    for w in Alphabet(["a", "b", "r"]).enumerate(2):
        assert w * w in words
