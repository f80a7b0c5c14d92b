import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import (
    hyperbolic_pl_maps,
    moebius_fixed_points,
    pl_eval,
    pl_fixed_points,
    pl_maps,
    rationals,
)
from rigiditylab.errors import UnboundWordError
from rigiditylab.words import Word
from rigiditylab.zhomeo import (
    Classification,
    FormalWord,
    Kind,
    MoebiusLift,
    Orientation,
    PLZMap,
    classify,
    compose,
    evaluate,
    fixed_points,
    invert,
    translation_number,
)

SAMPLE = PLZMap([(0, 0), (F(1, 4), F(3, 8)), (F(1, 2), F(1, 2)), (F(3, 4), F(5, 8))])


# evaluate -------------------------------------------------------------------

def test_identity_evaluates_to_input():
    assert evaluate(PLZMap.identity(), F(3, 10)) == F(3, 10)


def test_half_translation():
    assert evaluate(PLZMap.translation(F(1, 2)), F(3, 4)) == F(5, 4)


def test_breakpoint_read_off():
    assert evaluate(SAMPLE, F(1, 4)) == F(3, 8)


def test_formal_word_without_rep_is_unbound():
    with pytest.raises(UnboundWordError):
        FormalWord(Word.parse("a")).evaluate(0)


@given(pl_maps(), rationals)
def test_evaluate_matches_reference_scan(f, x):
    assert f.evaluate(x) == pl_eval(f.breakpoints, x)


@given(pl_maps(), rationals)
def test_period_one_equivariance(f, x):
    assert f.evaluate(x + 1) == f.evaluate(x) + 1


@given(pl_maps(), rationals, rationals)
def test_strictly_increasing(f, x, y):
    if x < y:
        assert f.evaluate(x) < f.evaluate(y)


# compose / invert -------------------------------------------------------------

def test_compose_with_inverse_is_identity():
    assert compose(SAMPLE, invert(SAMPLE)).is_identity()


def test_translations_add():
    half = PLZMap.translation(F(1, 2))
    assert compose(half, half) == PLZMap.translation(1)


def test_two_reversing_maps_compose_to_preserving():
    r1, r2 = PLZMap.reflection(0), PLZMap.reflection(F(1, 3))
    assert compose(r1, r2).orientation is Orientation.PRESERVING


def test_invert_identity_and_translation():
    assert invert(PLZMap.identity()).is_identity()
    assert invert(PLZMap.translation(F(1, 3))) == PLZMap.translation(F(-1, 3))


@given(pl_maps(), pl_maps(), rationals)
def test_compose_is_pointwise(f, g, x):
    assert compose(f, g).evaluate(x) == pl_eval(f.breakpoints, pl_eval(g.breakpoints, x))


@given(pl_maps(), rationals)
def test_inverse_undoes(f, x):
    assert invert(f).evaluate(f.evaluate(x)) == x


@given(pl_maps())
def test_reversed_map_anticommutes_with_unit_translation(f):
    g = PLZMap.reflection(0).compose(f)
    assert g.orientation is Orientation.REVERSING
    for x in (F(0), F(1, 7), F(5, 9)):
        assert g.evaluate(x + 1) == g.evaluate(x) - 1
        assert g.evaluate(x) == pl_eval(g.breakpoints, x, reversing=True)


# fixed points -------------------------------------------------------------------

def test_sample_fixed_points():
    fps = fixed_points(SAMPLE)
    assert [(p.location, p.kind) for p in fps] == [(0, Kind.REPELLING), (F(1, 2), Kind.ATTRACTING)]


def test_translation_has_no_fixed_points():
    assert not fixed_points(PLZMap.translation(F(1, 2)))


def test_moebius_diagonal_golden_values():
    # golden values, frozen from the numpy eigenvector oracle below
    f = MoebiusLift(((2, 0), (0, 0.5)))
    fps = f.fixed_points()
    att, rep = fps.attracting[0], fps.repelling[0]
    assert att.location == pytest.approx(0.0, abs=1e-12)
    assert rep.location == pytest.approx(0.5, abs=1e-12)
    assert f.derivative_at_attractor() == pytest.approx(0.25, abs=1e-15)
    assert att.radius <= 1e-12


def test_moebius_fixed_points_match_numpy_and_finite_differences():
    m = ((1.7, 0.9), (0.6, 0.9176470588235294))
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    s = math.sqrt(det)
    m = tuple(tuple(v / s for v in row) for row in m)
    f = MoebiusLift(m)
    att_ref, rep_ref = moebius_fixed_points(m)
    fps = f.fixed_points()
    assert fps.attracting[0].location == pytest.approx(att_ref, abs=1e-9)
    assert fps.repelling[0].location == pytest.approx(rep_ref, abs=1e-9)
    h = 1e-6
    t = fps.attracting[0].location
    deriv = (f.evaluate(t + h) - f.evaluate(t - h)) / (2 * h)
    assert deriv == pytest.approx(f.derivative_at_attractor(), rel=1e-5)


@given(hyperbolic_pl_maps())
def test_fixed_points_match_reference(f):
    ours = [(p.location, p.kind.value) for p in f.fixed_points()]
    assert ours == pl_fixed_points(f.breakpoints)


@given(hyperbolic_pl_maps())
def test_inverse_swaps_kinds(f):
    a = [(p.location, p.kind) for p in f.fixed_points()]
    b = [(p.location, p.kind.swapped()) for p in f.inverse().fixed_points()]
    assert a == b


@given(hyperbolic_pl_maps(), pl_maps())
def test_conjugate_moves_fixed_points(f, h):
    c = h.compose(f).compose(h.inverse())
    moved = sorted((h.evaluate(p.location) % 1, p.kind) for p in f.fixed_points())
    assert [(p.location, p.kind) for p in c.fixed_points()] == moved


def test_reversing_map_has_one_fixed_point():
    g = PLZMap.reflection(F(1, 3))
    fps = g.fixed_points()
    assert len(fps) == 1
    assert g.evaluate(fps.points[0].location) == fps.points[0].location


# classify -------------------------------------------------------------------------

def test_classify_examples():
    assert classify(PLZMap.identity()) is Classification.IDENTITY
    assert classify(SAMPLE) is Classification.HYPERBOLIC_LIKE
    assert classify(PLZMap.translation(F(1, 2))) is Classification.FIXED_POINT_FREE
    assert classify(PLZMap.reflection(0)) is Classification.ORIENTATION_REVERSING


def test_slope_one_diagonal_segment_is_degenerate():
    f = PLZMap([(0, 0), (F(1, 4), F(1, 4)), (F(1, 2), F(3, 4))])
    assert classify(f) is Classification.DEGENERATE
    assert f.fixed_points().degenerate


# translation number ------------------------------------------------------------------

def test_translation_number_of_half_translation():
    iv = translation_number(PLZMap.translation(F(1, 2)), 4)
    assert iv.lo <= F(1, 2) <= iv.hi


def test_hyperbolic_map_has_zero_translation_number():
    assert translation_number(SAMPLE, 10).contains_zero()


def test_shifted_hyperbolic_map_excludes_zero():
    g = SAMPLE.compose(PLZMap.translation(1))
    # reference iteration: displacement after n steps is at least n - 2
    x = F(0)
    for _ in range(10):
        x = pl_eval(g.breakpoints, x)
    assert x >= 10 - 2
    assert translation_number(g, 10).excludes_zero()


@given(hyperbolic_pl_maps(), st.integers(0, 47))
def test_orbits_converge_monotonically(f, k):
    x = F(k, 48)
    fps = f.fixed_points()
    if any(x % 1 == p.location for p in fps):
        return
    assert translation_number(f, 10).contains_zero()
    pts = [float(x)]
    y = x
    for _ in range(64):
        y = f.evaluate(y)
        pts.append(float(y))
    diffs = [b - a for a, b in zip(pts, pts[1:])]
    assert all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs)
    att = [float(p.location) for p in fps.attracting]
    assert min(abs((pts[-1] - a + 0.5) % 1 - 0.5) for a in att) < 1e-3


# moebius ------------------------------------------------------------------------------

def test_moebius_agrees_with_pl_interpolant():
    f = MoebiusLift(((1.5, 0.4), (0.3, 0.7466666666666667)))
    pl = f.to_pl(4096)
    for k in range(1024):
        x = k / 1024 + 1 / 2048
        assert abs(float(pl.evaluate(F(x))) - f.evaluate(x)) < 1e-5


def test_moebius_inverse_within_tolerance():
    f = MoebiusLift(((1.5, 0.4), (0.3, 0.7466666666666667)), deck=2)
    g = f.compose(f.inverse())
    for k in range(64):
        x = k / 64
        assert abs(g.evaluate(x) - x) < 1e-12


def test_moebius_commutes_with_unit_translation():
    f = MoebiusLift(((1.5, 0.4), (0.3, 0.7466666666666667)), deck=-1)
    for k in range(16):
        x = k / 16
        assert f.evaluate(x + 1) == pytest.approx(f.evaluate(x) + 1, abs=1e-12)
