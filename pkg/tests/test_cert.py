import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from meyerkit.cert import (
    CoverError,
    PowerForm,
    Relation,
    covering_radius,
    integer_view,
    intersection_cover,
    massicot_wagner_bound,
    min_gap,
    mw_ratio,
    product_cover_check,
    recheck_cover,
    ruzsa_cover,
    sumset_power,
    vector_view,
)
from oracles import random_cover_instance

Z = integer_view()


# ---------------------------------------------------------------------------
# Ruzsa covering


def test_ruzsa_singletons():
    cert = ruzsa_cover([0], [0], Z)
    assert cert.F == [0] and cert.verified


def test_ruzsa_interval():
    cert = ruzsa_cover(list(range(6)), [0, 1], Z)
    assert cert.F == [0, 2, 4] and cert.verified
    assert cert.relation is Relation.X_subset_FYYinv
    assert recheck_cover(range(6), cert.F, {-1, 0, 1}.__contains__, Z) == []


def test_ruzsa_single_translate_when_already_inside():
    cert = ruzsa_cover([2, 0, 1], [0, 1, 2], Z)
    assert cert.F == [2] and cert.verified


def test_ruzsa_empty_x():
    cert = ruzsa_cover([], [0], Z)
    assert cert.F == [] and cert.verified


@given(st.lists(st.integers(-30, 30), max_size=25), st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_ruzsa_always_verified(X, Y):
    cert = ruzsa_cover(X, Y, Z)
    diffs = {a - b for a in Y for b in Y}
    assert all(any(x - f in diffs for f in cert.F) for x in X)
    assert cert.verified
    # translates of Y by F are pairwise disjoint, so |F| |Y| <= |XY|
    assert len(cert.F) * len(set(Y)) <= len({x + y for x in X for y in Y})


# ---------------------------------------------------------------------------
# intersections


def test_intersection_trivial():
    cert = intersection_cover([0, 1], [[0, 1, 2]], [[0]], Z)
    assert cert.verified and len(cert.F) == 1 and cert.F[0] in {0, 1, 2}


def test_intersection_symmetric_example():
    X = [-1, 0, 1]
    cert = intersection_cover(X, [X, X], [[0], [0]], Z)
    assert cert.F == [0] and cert.verified and cert.bound_satisfied


def test_intersection_precondition_violation():
    with pytest.raises(CoverError) as err:
        intersection_cover([0, 5], [[0, 1]], [[0]], Z)
    assert err.value.element == 5


def test_intersection_random_instances():
    rng = random.Random(3)
    for trial in range(100):
        X0, Xs, Fs, _, add, sub = random_cover_instance(rng, trial % 3)
        view = Z if trial % 3 == 0 else vector_view(trial % 3)
        cert = intersection_cover(X0, Xs, Fs, view)
        common = set.intersection(*({sub(y, x) for x in Xi for y in Xi} for Xi in Xs))
        assert all(any(sub(x, f) in common for f in cert.F) for x in X0)
        assert cert.verified and len(cert.F) <= math.prod(len(F) for F in Fs)


# ---------------------------------------------------------------------------
# products


def test_product_cover_subgroup():
    assert product_cover_check(lambda x: x % 2 == 0, [0, 2, 4], [0], Z).verified


def test_product_cover_empty_f_fails():
    cert = product_cover_check(lambda x: x in {-1, 0, 1}, [-1, 0, 1], [], Z)
    assert not cert.verified and cert.failures


def test_product_cover_interval():
    # [-1,1] + [-1,1] = [-2,2] inside {-1,0,1} + {-1,1}
    cert = product_cover_check(lambda x: -1 <= x <= 1, [-1, 0, 1], [-1, 1], Z)
    assert cert.verified and cert.relation is Relation.X2_subset_FX


# ---------------------------------------------------------------------------
# measurements


def test_min_gap_integers():
    rep = min_gap(list(range(-3, 4)), 3, Z)
    assert rep.gap == 1.0 and not rep.degenerate


def test_min_gap_degenerate_and_small():
    assert min_gap([0, 0, 1]).degenerate
    rep = min_gap([5])
    assert rep.gap is None


@given(st.lists(st.integers(-100, 100), min_size=2, max_size=30, unique=True), st.integers(-50, 50), st.randoms())
def test_min_gap_invariances(xs, t, rnd):
    base = min_gap(xs).gap
    oracle = min(abs(a - b) for i, a in enumerate(xs) for b in xs[i + 1:])
    assert base == oracle
    ys = list(xs)
    rnd.shuffle(ys)
    assert min_gap(ys).gap == base
    assert min_gap([x + t for x in xs]).gap == base


def test_sumset_power():
    assert sorted(sumset_power([0, 1], 3, Z)) == [0, 1, 2, 3]
    assert sumset_power([(0, 1)], 2, vector_view(2)) == [(0, 2)]


def test_covering_radius_examples():
    assert covering_radius(list(range(11)), [(0, 10)], Fraction(1, 10)).radius == pytest.approx(0.5)
    assert covering_radius([0], [(0, 1)], Fraction(1, 10)).radius == 1.0
    assert math.isinf(covering_radius([], [(0, 1)], 1).radius)


@given(st.lists(st.integers(0, 20), min_size=1, max_size=10), st.lists(st.integers(0, 20), max_size=10))
def test_covering_radius_antitone(xs, extra):
    box = [(0, 20)]
    a = covering_radius(xs, box, Fraction(1, 4)).radius
    b = covering_radius(xs + extra, box, Fraction(1, 4)).radius
    assert b <= a


def test_covering_radius_certified_slack():
    cr = covering_radius([(0, 0), (2, 2)], [(0, 2), (0, 2)], Fraction(1, 2))
    assert cr.certified_radius == pytest.approx(cr.radius + 0.5 * math.sqrt(2))


# ---------------------------------------------------------------------------
# Massicot-Wagner constants


def test_mw_trivial():
    b = massicot_wagner_bound(1, 1)
    assert (b.n, b.c.value(), b.cover_bound.value()) == (0, 1, 3)


def test_mw_two_two():
    b = massicot_wagner_bound(2, 2)
    assert b.n == 6
    assert b.c == PowerForm(4, -63)
    assert b.c.value() == Fraction(1, 4**63)
    # 2K / c + 1
    assert b.cover_bound.value() == 4 * Fraction(4**63) + 1
    assert (Fraction(8, 7)) ** 6 >= 2 > (Fraction(8, 7)) ** 5


@pytest.mark.parametrize("K,m", [(0, 1), (1, 0), (-2, 3), (1.5, 2)])
def test_mw_domain(K, m):
    with pytest.raises(ValueError):
        massicot_wagner_bound(K, m)


@given(st.integers(1, 40), st.integers(1, 6))
def test_mw_minimal_n(K, m):
    b = massicot_wagner_bound(K, m)
    q = mw_ratio(m)
    assert q**b.n >= K
    assert b.n == 0 or q ** (b.n - 1) < K
    # agrees with the closed form away from exact powers
    if K > 1:
        assert b.n == math.ceil(math.log(K) / -math.log(1 - 1 / (4 * m)) - 1e-12)


@given(st.integers(1, 30), st.integers(1, 5))
def test_mw_monotone(K, m):
    assert massicot_wagner_bound(K + 1, m).n >= massicot_wagner_bound(K, m).n
    assert massicot_wagner_bound(K, m + 1).n >= massicot_wagner_bound(K, m).n
