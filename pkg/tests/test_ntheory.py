import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from thetatwist.errors import NotInvertible, NotPrime
from thetatwist.ntheory import (
    Residue,
    divisor_count,
    divisor_count_table,
    divisors,
    euler_phi,
    factorize,
    gcd,
    gcd3,
    is_prime,
    mod_inverse,
    moebius,
    moebius_table,
    prime_sieve,
    primitive_root,
)


@pytest.mark.parametrize("a, b, expected", [(0, 7, 7), (12, 18, 6), (35, 64, 1), (0, 0, 0)])
def test_gcd(a, b, expected):
    assert gcd(a, b) == expected


def test_gcd3():
    assert gcd3(3 * 5 * 7, 3 * 5 * 11, 3 * 5 * 13) == 15
    assert gcd3(0, 0, 9) == 9


def test_mod_inverse_examples():
    assert int(mod_inverse(1, 10)) == 1
    assert int(mod_inverse(3, 7)) == 5
    assert isinstance(mod_inverse(3, 7), Residue)
    with pytest.raises(NotInvertible):
        mod_inverse(4, 6)


def test_residue_reduces():
    assert Residue(-1, 7).value == 6
    with pytest.raises(ValueError):
        Residue(1, 0)


@st.composite
def st_coprime_pair(draw):
    m = draw(st.integers(min_value=2, max_value=10**4))
    a = draw(st.integers(min_value=1, max_value=m - 1).filter(lambda x: gcd(x, m) == 1))
    return a, m


@settings(max_examples=200)
@given(st_coprime_pair())
def test_mod_inverse_property(pair):
    a, m = pair
    assert a * int(mod_inverse(a, m)) % m == 1


@pytest.mark.parametrize("n, expected", [(1, 1), (12, 6), (97, 2)])
def test_divisor_count(n, expected):
    assert divisor_count(n) == expected


def test_divisor_count_multiplicative():
    for m in range(1, 101):
        for n in range(1, 10**4 // m + 1):
            if gcd(m, n) == 1:
                assert divisor_count(m * n) == divisor_count(m) * divisor_count(n)


@pytest.mark.parametrize("n, expected", [(1, 1), (30, -1), (12, 0), (7, -1), (6, 1)])
def test_moebius(n, expected):
    assert moebius(n) == expected


def test_moebius_sum_over_divisors():
    for n in range(1, 2001):
        assert sum(moebius(d) for d in divisors(n)) == (1 if n == 1 else 0)


def test_tables_match_scalar_functions():
    N = 500
    d = divisor_count_table(N)
    mu = moebius_table(N)
    for n in range(1, N + 1):
        assert d[n] == divisor_count(n)
        assert mu[n] == moebius(n)


def test_factorize_and_divisors():
    assert factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert euler_phi(1) == 1
    assert euler_phi(36) == 12
    with pytest.raises(ValueError):
        factorize(0)


def test_prime_sieve_agrees_with_is_prime():
    sieve = prime_sieve(1000)
    assert [n for n in range(1001) if sieve[n]] == [n for n in range(1001) if is_prime(n)]


@pytest.mark.parametrize("p, expected", [(3, 2), (5, 2), (7, 3), (23, 5), (41, 6)])
def test_primitive_root(p, expected):
    assert primitive_root(p) == expected


@pytest.mark.parametrize("n", [8, 9, 2, 1])
def test_primitive_root_rejects(n):
    with pytest.raises(NotPrime):
        primitive_root(n)


@settings(max_examples=50)
@given(st.sampled_from([3, 5, 7, 11, 13, 101, 257, 997]))
def test_primitive_root_generates(p):
    g = primitive_root(p)
    assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1
