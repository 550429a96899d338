import math

import numpy as np
import pytest

from thetatwist.errors import (
    BadLeadingCoefficient,
    DegenerateGrid,
    OutOfRange,
    ResourceLimit,
)
from thetatwist.forms import (
    FormTable,
    build_table,
    delta_coefficients,
    deligne_max_ratio,
    hecke_integer_residual,
    hecke_residual,
    load_or_build_table,
    normalize,
    rankin_selberg_mass,
    rankin_selberg_slope,
    short_interval_constant,
    short_interval_sum,
)
from thetatwist.ntheory import gcd, prime_sieve

# tau(1..12)
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]


@pytest.fixture(scope="module")
def table():
    return build_table(5000)


@pytest.mark.parametrize("method", ["jacobi", "pentagonal", "squaring"])
def test_delta_coefficients_small(method):
    assert delta_coefficients(12, method=method) == TAU
    assert delta_coefficients(1, method=method) == [1]


def test_constructions_agree():
    N = 2000
    assert delta_coefficients(N, "jacobi") == delta_coefficients(N, "squaring")
    assert delta_coefficients(N, "jacobi") == delta_coefficients(N, "pentagonal")


def test_prime_power_recursion():
    a = delta_coefficients(1000)
    p11 = 5**11
    tau25 = a[4] ** 2 - p11
    tau125 = a[4] * tau25 - p11 * a[4]
    assert a[24] == tau25
    assert a[124] == tau125
    assert a[999] == a[7] * tau125


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        delta_coefficients(101, max_n=100)
    with pytest.raises(ResourceLimit):
        delta_coefficients(60_000, method="squaring")
    with pytest.raises(ValueError):
        delta_coefficients(0)
    with pytest.raises(ValueError):
        delta_coefficients(10, method="nope")


def test_normalize():
    t = normalize([1], 12)
    assert t.lam[1] == 1.0
    assert t.N == 1
    t = normalize(TAU, 12)
    assert t.lam[2] == pytest.approx(-24 / 2**5.5, abs=1e-15)
    assert t.lam[2] == pytest.approx(-0.530330, abs=1e-6)
    assert t.lam[4] == pytest.approx(-0.71875, abs=1e-15)
    assert t.a[6] == -6048


def test_normalize_rejects_leading_coefficient():
    with pytest.raises(BadLeadingCoefficient):
        normalize([2, 3], 12)
    with pytest.raises(BadLeadingCoefficient):
        normalize([], 12)


def test_table_is_immutable(table):
    assert isinstance(table, FormTable)
    with pytest.raises(ValueError):
        table.lam[1] = 0.0


def test_require(table):
    table.require(table.N)
    with pytest.raises(OutOfRange):
        table.require(table.N + 1)


def test_only_weight_twelve():
    with pytest.raises(ValueError):
        build_table(10, weight=16)


def test_hecke_residuals(table):
    for k in range(1, 50):
        assert hecke_residual(table, 1, k) == 0
    assert hecke_integer_residual(table, 2, 3) == 0
    assert hecke_integer_residual(table, 2, 2) == 0
    assert hecke_residual(table, 2, 2) < 1e-12
    for m in range(1, 40):
        for n in range(1, 5000 // m + 1, 7):
            assert hecke_integer_residual(table, m, n) == 0
    with pytest.raises(OutOfRange):
        hecke_residual(table, 100, 100)


def test_multiplicative_on_coprime_pairs(table):
    a = table.a
    for m in range(2, 71):
        for n in range(m + 1, table.N // m + 1):
            if gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n]


def test_lambda_at_prime_squares(table):
    for p in np.flatnonzero(prime_sieve(70)):
        p = int(p)
        assert abs(table.lam[p * p] - (table.lam[p] ** 2 - 1)) <= 1e-10


def test_deligne(table):
    assert deligne_max_ratio(normalize([1], 12)) == 1.0
    assert deligne_max_ratio(table) <= 1.0


def test_rankin_selberg(table):
    assert rankin_selberg_mass(table, 1) == 1.0
    slope = rankin_selberg_slope(table, [2**k for k in range(8, 13)])
    assert 0.9 <= slope <= 1.1
    with pytest.raises(DegenerateGrid):
        rankin_selberg_slope(table, [10, 100])


def test_rankin_selberg_constant_sequence():
    lam = np.ones(1001)
    lam[0] = 0.0
    t = FormTable(weight=12, a=None, lam=lam)
    assert rankin_selberg_slope(t, [10, 100, 1000]) == pytest.approx(1.0, abs=1e-12)


def test_short_interval(table):
    assert short_interval_sum(table, 10, 0) == 0.0
    full = short_interval_sum(table, 0, table.N)
    assert full <= math.sqrt(table.N * rankin_selberg_mass(table, table.N)) + 1e-9
    assert short_interval_constant(table, 4000, 100) <= 10.0
    with pytest.raises(OutOfRange):
        short_interval_sum(table, table.N, 1)


def test_cache_roundtrip(tmp_path):
    first = load_or_build_table(200, cache_dir=str(tmp_path))
    assert (tmp_path / "tau-200.txt").exists()
    lines = (tmp_path / "tau-200.txt").read_text().split()
    assert int(lines[1]) == -24
    second = load_or_build_table(200, cache_dir=str(tmp_path))
    assert list(second.a) == list(first.a)
    assert np.array_equal(second.lam, first.lam)


def test_cache_rebuilds_short_file(tmp_path):
    (tmp_path / "tau-20.txt").write_text("1\n-24\n")
    t = load_or_build_table(20, cache_dir=str(tmp_path))
    assert t.N == 20
    assert int(t.a[12]) == -370944


@pytest.mark.slow
def test_acceptance_scale():
    t = build_table(2**17)
    assert deligne_max_ratio(t) <= 1.0
    assert 0.9 <= rankin_selberg_slope(t, [2**k for k in range(10, 18)]) <= 1.1
