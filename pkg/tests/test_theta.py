import itertools
import math

import numpy as np
import pytest

from thetatwist.errors import DegenerateGrid, ResourceLimit
from thetatwist.forms import build_table
from thetatwist.theta import (
    ThetaCounts,
    r2_oracle,
    r_bound_slope,
    r_ell,
    r_ell_box,
    trivial_bound,
    trivial_bound_ratio,
)


def enumerate_counts(ell, N, M):
    counts = np.zeros(N + 1, dtype=np.int64)
    for m in itertools.product(range(-M, M + 1), repeat=ell):
        n = sum(x * x for x in m)
        if n <= N:
            counts[n] += 1
    return counts


@pytest.mark.parametrize("ell, n, expected", [(1, 4, 2), (2, 5, 8), (4, 1, 8), (1, 3, 0), (3, 0, 1)])
def test_r_ell_examples(ell, n, expected):
    assert r_ell(ell, 10)[n] == expected


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_r_ell_matches_enumeration(ell):
    N = 40
    assert np.array_equal(r_ell(ell, N).counts, enumerate_counts(ell, N, math.isqrt(N)))


def test_convolution_consistency():
    N = 2000
    rs = {ell: r_ell(ell, N).counts for ell in range(1, 7)}
    for a in range(1, 4):
        for b in range(1, 7 - a):
            conv = np.convolve(rs[a], rs[b])[: N + 1]
            assert np.array_equal(conv, rs[a + b])


def test_r2_against_oracle():
    counts = r_ell(2, 5000).counts
    for n in range(1, 5001):
        assert counts[n] == r2_oracle(n)


@pytest.mark.parametrize("n, expected", [(1, 4), (3, 0), (25, 12), (5, 8), (65, 16)])
def test_r2_oracle(n, expected):
    assert r2_oracle(n) == expected


def test_r2_oracle_rejects_zero():
    with pytest.raises(ValueError):
        r2_oracle(0)


def test_box_counts_small():
    box = r_ell_box(1, 4)
    assert box.truncated and box.box == 2
    assert list(box.counts) == [1, 2, 0, 0, 2]
    assert box.total() == 5
    assert r_ell_box(2, 2).total() == 9


@pytest.mark.parametrize("ell, X", [(1, 50), (2, 17), (3, 10), (4, 30), (2, 0.5)])
def test_box_mass(ell, X):
    box = r_ell_box(ell, X)
    assert box.total() == (2 * box.box + 1) ** ell
    assert len(box) == ell * box.box**2 + 1


def test_box_matches_enumeration():
    for ell, X in [(2, 20), (3, 10)]:
        M = math.isqrt(X)
        box = r_ell_box(ell, X)
        assert np.array_equal(box.counts, enumerate_counts(ell, ell * M * M, M))


def test_box_agrees_with_unrestricted_below_box():
    X = 10
    box = r_ell_box(3, X)
    full = r_ell(3, 9)
    assert np.array_equal(box.counts[:10], full.counts)
    X = 1000
    M = math.isqrt(X)
    assert np.array_equal(r_ell_box(4, X).counts[: M * M + 1], r_ell(4, M * M).counts)


def test_counts_are_read_only():
    counts = r_ell(2, 10)
    assert isinstance(counts, ThetaCounts)
    with pytest.raises(ValueError):
        counts.counts[0] = 5


def test_resource_limits():
    with pytest.raises(ResourceLimit):
        r_ell(2, 101, limit=100)
    with pytest.raises(ResourceLimit):
        r_ell_box(3, 100, limit=200)
    with pytest.raises(ValueError):
        r_ell(0, 10)
    with pytest.raises(ValueError):
        r_ell(2, -1)


@pytest.mark.parametrize("ell, N, ceiling", [(3, 2**14, 0.65), (4, 2**14, 1.15), (8, 2**12, 3.15)])
def test_r_bound_slope(ell, N, ceiling):
    assert r_bound_slope(ell, N) <= ceiling


def test_r_bound_slope_grid():
    with pytest.raises(DegenerateGrid):
        r_bound_slope(3, 99)


@pytest.mark.parametrize("N", [100, 150, 255])
@pytest.mark.parametrize("ell", [3, 4])
def test_r_bound_slope_small_N(ell, N):
    assert 0.0 <= r_bound_slope(ell, N) <= ell / 2.0
    with pytest.raises(DegenerateGrid):
        r_bound_slope(ell, N, xmin=64)


def test_trivial_bound_dominates():
    t = build_table(600)
    w = lambda x: np.ones_like(x)  # noqa: E731
    X = 600
    n = np.arange(X // 2 + 1, X + 1)
    value = np.sum(t.lam[n] * r_ell(3, X).counts[n])
    bound = trivial_bound(3, X, t, w)
    assert abs(value) <= bound
    assert 0 <= trivial_bound_ratio(value, 3, X, t, w) <= 1
    assert trivial_bound(3, 0.5, t, w) == 0.0
