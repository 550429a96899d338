import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from thetatwist.characters import build_char
from thetatwist.circle import (
    ArcDecomposition,
    arc_integrals,
    build_arcs,
    cauchy_schwarz_minor,
    choose_Delta,
    choose_Q,
    direct_sum,
    dirichlet_approx,
    heuristic_exponent,
    integral_total,
    major_bound,
    minor_bound,
    minor_sup_F,
    product_poly,
    theorem11_bound,
    theorem11_exponent,
    theorem12_bound,
    theorem12_exponent,
    trivial_exponent,
)
from thetatwist.errors import BadDelta, BadParameters, HypothesisViolated
from thetatwist.expsums import make_weight
from thetatwist.forms import build_table
from thetatwist.ntheory import gcd
from thetatwist.theta import r_ell_box


@pytest.fixture(scope="module")
def table():
    return build_table(2048)


def test_dirichlet_examples():
    assert dirichlet_approx(1 / 3, 10) == (1, 3, 0.0)
    a, q, beta = dirichlet_approx(0.32, 10)
    assert (a, q) == (1, 3)
    assert beta == pytest.approx(-0.0133333333, abs=1e-9)
    a, q, beta = dirichlet_approx(0.99, 10)
    assert (a, q) == (1, 1)
    assert beta == pytest.approx(-0.01, abs=1e-12)


def test_dirichlet_convergent():
    a, q, beta = dirichlet_approx(math.pi - 3, 1000)
    assert (a, q) == (16, 113)
    assert abs(beta) <= 1 / (113 * 1000)


def test_dirichlet_domain_edge():
    for Q in (10, 200, 5000):
        a, q, beta = dirichlet_approx(1 + 1 / Q, Q)
        assert (a, q) == (1, 1)
        assert beta == pytest.approx(1 / Q, rel=1e-9)


def test_dirichlet_rejects_small_Q():
    with pytest.raises(ValueError):
        dirichlet_approx(0.5, 0.5)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=0, max_value=1, exclude_max=True, allow_nan=False),
    st.one_of(st.integers(min_value=1, max_value=100), st.integers(min_value=101, max_value=10**4)),
)
def test_dirichlet_postconditions(alpha, Q):
    a, q, beta = dirichlet_approx(alpha, Q)
    assert 1 <= a <= q <= Q
    assert gcd(a, q) == 1
    assert abs(beta) <= 1 / (q * Q) + 1e-12
    offset = alpha - a / q - beta
    assert abs(offset - round(offset)) <= 1e-12


def test_dirichlet_sweep():
    rng = np.random.default_rng(20260417)
    alphas = rng.random(10**4)
    bounds = rng.integers(1, 10**4, size=10**4, endpoint=True)
    for i, (alpha, Q) in enumerate(zip(alphas, bounds)):
        Q = int(Q)
        a, q, beta = dirichlet_approx(alpha, Q)
        assert 1 <= a <= q <= Q
        assert gcd(a, q) == 1
        assert abs(beta) <= 1 / (q * Q) + 1e-12
        if i < 500:
            smaller = np.arange(1, q)
            offsets = np.abs(alpha * smaller - np.round(alpha * smaller))
            assert np.all(offsets > 1 / Q - 1e-12)


def test_arcs_single_major_arc():
    arcs = build_arcs(1, 10, 100)
    assert isinstance(arcs, ArcDecomposition)
    assert arcs.domain == pytest.approx((0.1, 1.1))
    assert len(arcs.major) == 1 and arcs.major[0] == pytest.approx((0.9, 1.1))
    assert len(arcs.minor) == 1 and arcs.minor[0] == pytest.approx((0.1, 0.9))
    assert arcs.major_measure == pytest.approx(0.2)
    assert arcs.expected_major_measure() == pytest.approx(0.2)
    assert arcs.disjoint
    assert arcs.contains_major(1.0)
    assert not arcs.contains_major(0.5)


def test_arcs_measure():
    arcs = build_arcs(3, 100, 1000)
    assert len(arcs.arcs) == 4
    assert arcs.disjoint
    assert arcs.major_measure == pytest.approx(0.02 + 0.01 + 4 / 300, rel=1e-12)
    assert arcs.major_measure == pytest.approx(arcs.expected_major_measure(), rel=1e-12)
    assert arcs.major_measure + arcs.minor_measure == pytest.approx(1.0, rel=1e-12)
    lefts = [arc.left for arc in arcs.arcs]
    assert lefts == sorted(lefts)


def test_arcs_overlap_is_reported(caplog):
    with caplog.at_level("WARNING", logger="thetatwist"):
        arcs = build_arcs(10, 15, 100)
    assert not arcs.disjoint
    assert ((1, 10), (1, 9)) in arcs.overlaps
    assert arcs.major_measure < arcs.expected_major_measure()
    assert arcs.major_measure + arcs.minor_measure == pytest.approx(1.0, rel=1e-12)
    assert "overlapping major arcs" in caplog.text


@pytest.mark.parametrize("P, Q, X", [(5, 5, 100), (0, 10, 100), (3, 200, 100)])
def test_arcs_bad_parameters(P, Q, X):
    with pytest.raises(BadParameters):
        build_arcs(P, Q, X)


@pytest.mark.parametrize("X, ell, p, j", [(512, 3, 5, 2), (2048, 4, 13, 1), (700, 5, 7, 3)])
def test_orthogonality(X, ell, p, j, table):
    chi = build_char(p, j)
    w = make_weight(1)
    direct = direct_sum(X, ell, table, chi, w)
    total = integral_total(X, ell, table, chi, w)
    assert abs(direct - total) <= 1e-9 * max(1.0, abs(direct))
    assert direct_sum(X, ell, table, chi, w, box=False) == pytest.approx(direct, rel=1e-12, abs=1e-9)


def test_empty_sums(table):
    chi = build_char(5, 2)
    w = make_weight(1)
    assert direct_sum(512, 0, table, chi, w) == 0j
    assert direct_sum(0.5, 3, table, chi, w) == 0j


def test_product_poly_frequencies(table):
    chi = build_char(5, 2)
    poly = product_poly(100, 3, table, chi, make_weight(1))
    assert poly.lo == -100
    assert poly.hi == 3 * 100 - 51


def test_F_power_is_box_count():
    from thetatwist.expsums import F_coeffs

    assert np.array_equal(F_coeffs(200).power(3).coeffs, r_ell_box(3, 200).counts)


def test_arc_integrals_are_additive(table):
    chi = build_char(5, 2)
    w = make_weight(1)
    arcs = build_arcs(3, 40, 512)
    result = arc_integrals(3, 512, table, chi, w, arcs)
    major, minor = result
    assert major + minor == pytest.approx(result.total, abs=1e-9)
    assert result.additivity_error <= 1e-9
    assert result.total == pytest.approx(direct_sum(512, 3, table, chi, w), rel=1e-9, abs=1e-9)


def test_arc_integrals_rejects_intervals(table):
    with pytest.raises(BadParameters):
        arc_integrals(3, 512, table, build_char(5, 2), make_weight(1), [(0.1, 0.2)])


def test_choose_Q():
    P, Q = choose_Q(13, 4096, 1, 3)
    assert Q == pytest.approx(13 ** (1 / 3) * 256, rel=1e-12)
    assert Q == pytest.approx(601.9, abs=0.1)
    assert P == pytest.approx(6.805, abs=1e-3)
    assert P * Q == pytest.approx(4096)
    _, Q16 = choose_Q(13, 4096, 16, 3)
    assert Q16 / Q == pytest.approx(16 ** (1 / 6), rel=1e-12)


def test_choose_Q_hypotheses():
    with pytest.raises(HypothesisViolated):
        choose_Q(5, 5, 1, 3)
    with pytest.raises(HypothesisViolated):
        choose_Q(5, 100, 1, 2)
    with pytest.raises(BadDelta):
        choose_Q(5, 100, 0.5, 3)


def test_choose_Delta():
    assert choose_Delta(5, 4096, 3) == pytest.approx((4096 / 5) ** (2 / 7), rel=1e-12)
    assert choose_Delta(5, 4096, 4) == pytest.approx((4096 / 5) ** (4 / 9), rel=1e-12)
    assert choose_Delta(5, 6, 3) >= 1.0
    with pytest.raises(HypothesisViolated):
        choose_Delta(7, 7, 3)
    with pytest.raises(HypothesisViolated):
        choose_Delta(5, 100, 2)


def test_exponents():
    assert trivial_exponent(3) == 1.5
    assert heuristic_exponent(3) == 1.0
    assert theorem11_exponent(3) == pytest.approx(4 / 3)
    assert theorem11_exponent(4) == pytest.approx(12 / 7)
    assert theorem12_exponent(3) == pytest.approx(19 / 14)
    for ell in range(3, 20):
        assert theorem11_exponent(ell) < trivial_exponent(ell)
        assert heuristic_exponent(ell) < theorem12_exponent(ell) < trivial_exponent(ell)


def test_bounds():
    assert theorem12_bound(2 * 1000.0, 3, 5) / theorem12_bound(1000.0, 3, 5) == pytest.approx(2 ** (19 / 14))
    assert theorem11_bound(1000.0, 3, 5, 1) == pytest.approx(5 ** (1 / 6) * 1000 ** (4 / 3))
    assert minor_bound(16, 2, 4, 8) == pytest.approx(48)
    assert major_bound(16, 2, 1, 1, 4, 1) == pytest.approx(60)


def test_minor_sup_F():
    arcs = build_arcs(3, 40, 400)
    sup, shape = minor_sup_F(400, arcs)
    assert 0 < sup <= 41
    assert shape == pytest.approx(20 / math.sqrt(3) + 400**0.25 + math.sqrt(40))


def test_cauchy_schwarz_bound_dominates(table):
    chi = build_char(5, 2)
    w = make_weight(1)
    for ell in (3, 4):
        measured, bound = cauchy_schwarz_minor(ell, 512, table, chi, w, build_arcs(3, 40, 512), samples=512)
        assert measured <= bound
