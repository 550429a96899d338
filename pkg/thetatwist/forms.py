# -*- coding: utf-8 -*-
"""
    thetatwist.forms
    ~~~~~~~~~~~~~~~~

    Fourier coefficients of the weight 12 level 1 cusp form (Ramanujan's
    tau function), their normalized Hecke eigenvalues, and checks of the
    coefficient properties used by the circle-method argument: Hecke
    multiplicativity, Deligne's bound, Rankin-Selberg mean squares and short
    interval sums.

    Exact coefficients are produced by series multiplication modulo several
    word-size primes and lifted with the Chinese remainder theorem, which keeps
    every inner loop in vectorized ``int64`` arithmetic.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BadLeadingCoefficient,
    DegenerateGrid,
    OutOfRange,
    ResourceLimit,
)
from .fitting import fit_exponent
from .ntheory import divisor_count_table, divisors, gcd, is_prime, moebius

logger = logging.getLogger("thetatwist")

__all__ = [
    "FormTable",
    "DEFAULT_MAX_N",
    "delta_coefficients",
    "normalize",
    "build_table",
    "load_or_build_table",
    "hecke_residual",
    "hecke_integer_residual",
    "deligne_max_ratio",
    "rankin_selberg_mass",
    "rankin_selberg_slope",
    "short_interval_sum",
    "short_interval_constant",
]

#: Default cap on table length.
DEFAULT_MAX_N = 400_000

#: Dense repeated squaring is quadratic; above this length it is refused.
SQUARING_MAX_N = 50_000

# residues stay below 2**21 so sparse and dense accumulations fit in int64
_PRIME_CEILING = 2**21

METHODS = ("jacobi", "pentagonal", "squaring")


@dataclass(frozen=True)
class FormTable:
    """
    Coefficient table of a holomorphic cusp form.

    Arrays are indexed by ``n``: ``a[n]`` is the integer coefficient and
    ``lam[n] = a[n] / n**((weight - 1) / 2)`` the normalized eigenvalue, for
    ``1 <= n <= N``. Slot 0 holds 0.

    :ivar weight: even weight of the form.
    :ivar a: object array of Python integers, or ``None`` for tables built
        directly from eigenvalues.
    :ivar lam: float array of normalized eigenvalues.
    """

    weight: int
    a: Optional[np.ndarray]
    lam: np.ndarray

    def __post_init__(self):
        self.lam.setflags(write=False)
        if self.a is not None:
            self.a.setflags(write=False)

    @property
    def N(self):
        return len(self.lam) - 1

    def require(self, n):
        if n > self.N:
            raise OutOfRange("index %d exceeds table length %d" % (n, self.N))

    def __repr__(self):
        return "<FormTable: weight=%d, N=%d>" % (self.weight, self.N)


def _moduli(N):
    # enough primes below 2**21 for |tau(n)| <= d(n) n^(11/2) <= 2 n^6
    bound = 4 * max(N, 2) ** 6
    moduli = []
    product = 1
    candidate = _PRIME_CEILING - 1
    while product <= bound:
        if is_prime(candidate):
            moduli.append(candidate)
            product *= candidate
        candidate -= 2
    return np.array(moduli, dtype=np.int64)


def _pentagonal_terms(length):
    """Sparse expansion of prod(1 - q^n) up to degree ``length - 1``."""
    terms = [(0, 1)]
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= length:
            break
        sign = -1 if k % 2 else 1
        terms.append((g1, sign))
        if g2 < length:
            terms.append((g2, sign))
        k += 1
    return terms


def _jacobi_terms(length):
    """Sparse expansion of prod(1 - q^n)^3 = sum (-1)^k (2k+1) q^(k(k+1)/2)."""
    terms = []
    k = 0
    while k * (k + 1) // 2 < length:
        terms.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return terms


def _sparse_fold(series, terms, moduli):
    # series has shape (len(moduli), length) with entries in [0, modulus)
    length = series.shape[1]
    acc = np.zeros_like(series)
    for shift, coeff in terms:
        acc[:, shift:] += coeff * series[:, : length - shift]
    acc %= moduli[:, None]
    return acc


def _dense_product(left, right, moduli):
    length = left.shape[1]
    out = np.empty_like(left)
    for i, modulus in enumerate(moduli):
        out[i] = np.convolve(left[i], right[i])[:length] % modulus
    return out


def _crt_lift(residues, moduli):
    """Lift residues to the symmetric range modulo the product of ``moduli``."""
    moduli = [int(m) for m in moduli]
    M = math.prod(moduli)
    total = np.zeros(residues.shape[1], dtype=object)
    for i, m in enumerate(moduli):
        Mi = M // m
        basis = Mi * pow(Mi, -1, m)
        total = total + residues[i].astype(object) * basis
    total = total % M
    half = M // 2
    return [int(x) - M if x > half else int(x) for x in total]


def delta_coefficients(N, method="jacobi", max_n=DEFAULT_MAX_N):
    """
    Exact coefficients ``tau(1..N)`` of ``q * prod(1 - q^n)^24``.

    :param N: Number of coefficients, at least 1.
    :type N: int
    :param method: ``"jacobi"`` (eight sparse folds of Jacobi's cube
        identity), ``"pentagonal"`` (twenty-four sparse folds of Euler's
        pentagonal expansion) or ``"squaring"`` (dense repeated squaring of the
        pentagonal series). All three are exact.
    :type method: str
    :param max_n: Refuse to build tables longer than this.
    :returns: List of Python integers ``[tau(1), ..., tau(N)]``.
    :rtype: list
    :raises ResourceLimit: if ``N`` exceeds ``max_n`` (or the squaring cap).
    """
    if N < 1:
        raise ValueError("N must be at least 1, got %r" % N)
    if N > max_n:
        raise ResourceLimit("N=%d exceeds the configured maximum %d" % (N, max_n))
    if method not in METHODS:
        raise ValueError("unknown method %r, expected one of %s" % (method, METHODS))
    if method == "squaring" and N > SQUARING_MAX_N:
        raise ResourceLimit(
            "dense squaring is limited to N <= %d, got %d" % (SQUARING_MAX_N, N)
        )

    # tau(n) is the coefficient of q^(n-1) in prod(1 - q^n)^24
    length = N
    moduli = _moduli(N)
    one = np.zeros((len(moduli), length), dtype=np.int64)
    one[:, 0] = 1
    logger.debug(
        "[thetatwist] building tau(1..%d) by %s with %d moduli", N, method, len(moduli)
    )

    if method == "jacobi":
        terms = _jacobi_terms(length)
        series = one
        for _ in range(8):
            series = _sparse_fold(series, terms, moduli)
    elif method == "pentagonal":
        terms = _pentagonal_terms(length)
        series = one
        for _ in range(24):
            series = _sparse_fold(series, terms, moduli)
    else:
        euler = _sparse_fold(one, _pentagonal_terms(length), moduli)
        e2 = _dense_product(euler, euler, moduli)
        e4 = _dense_product(e2, e2, moduli)
        e8 = _dense_product(e4, e4, moduli)
        e16 = _dense_product(e8, e8, moduli)
        series = _dense_product(e16, e8, moduli)

    return _crt_lift(series, moduli)


def normalize(a, weight):
    """
    Normalize integer coefficients to Hecke eigenvalues.

    :param a: Coefficients ``a(1), ..., a(N)``.
    :type a: sequence of int
    :param weight: Even weight ``kappa``.
    :type weight: int
    :returns: Table with ``lam[n] = a(n) / n**((weight - 1) / 2)``.
    :rtype: FormTable
    :raises BadLeadingCoefficient: if ``a(1) != 1``.
    """
    if len(a) == 0 or a[0] != 1:
        raise BadLeadingCoefficient(
            "a(1) must be 1, got %r" % (a[0] if len(a) else None)
        )
    N = len(a)
    coeffs = np.empty(N + 1, dtype=object)
    coeffs[0] = 0
    coeffs[1:] = [int(x) for x in a]
    n = np.arange(1, N + 1, dtype=np.float64)
    # n^((k-1)/2) = n^((k-2)/2) * sqrt(n) for even k
    half = (weight - 2) // 2
    scale = np.array([float(m**half) for m in range(1, N + 1)]) * np.sqrt(n)
    lam = np.zeros(N + 1, dtype=np.float64)
    lam[1:] = np.array([float(x) for x in coeffs[1:]]) / scale
    return FormTable(weight=weight, a=coeffs, lam=lam)


def build_table(N, weight=12, method="jacobi", max_n=DEFAULT_MAX_N):
    """Build the normalized table of the weight 12 form up to ``N``."""
    if weight != 12:
        raise ValueError("only the weight 12 form is implemented, got %r" % weight)
    return normalize(delta_coefficients(N, method=method, max_n=max_n), weight)


def _cache_path(cache_dir, N):
    return os.path.join(cache_dir, "tau-%d.txt" % N)


def load_or_build_table(N, cache_dir=None, weight=12, max_n=DEFAULT_MAX_N):
    """
    Return the table up to ``N``, reusing a text cache when available.

    The cache holds one integer per line, line ``n`` holding ``tau(n)``.
    """
    if cache_dir is None:
        return build_table(N, weight=weight, max_n=max_n)
    path = _cache_path(cache_dir, N)
    if os.path.exists(path):
        logger.debug("[thetatwist] reading tau cache %s", path)
        with open(path, "r", encoding="ascii") as f:
            a = [int(line) for line in f if line.strip()]
        if len(a) == N:
            return normalize(a, weight)
        logger.warning(
            "[thetatwist] tau cache %s has %d entries, expected %d; rebuilding",
            path,
            len(a),
            N,
        )
    a = delta_coefficients(N, max_n=max_n)
    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w", encoding="ascii") as f:
        f.write("\n".join(str(x) for x in a))
        f.write("\n")
    logger.debug("[thetatwist] wrote tau cache %s", path)
    return normalize(a, weight)


def hecke_residual(t, m, n):
    """
    ``|lam(mn) - sum_{d | (m,n)} mu(d) lam(m/d) lam(n/d)|``.

    :raises OutOfRange: if ``m * n`` exceeds the table.
    """
    t.require(m * n)
    lam = t.lam
    total = sum(
        moebius(d) * lam[m // d] * lam[n // d] for d in divisors(gcd(m, n))
    )
    return abs(float(lam[m * n] - total))


def hecke_integer_residual(t, m, n):
    """
    Exact residual ``a(mn) - sum_{d | (m,n)} mu(d) d^(k-1) a(m/d) a(n/d)``.

    :raises OutOfRange: if ``m * n`` exceeds the table.
    """
    if t.a is None:
        raise ValueError("table has no integer coefficients")
    t.require(m * n)
    a = t.a
    total = sum(
        moebius(d) * d ** (t.weight - 1) * a[m // d] * a[n // d]
        for d in divisors(gcd(m, n))
    )
    return int(a[m * n] - total)


def deligne_max_ratio(t):
    """``max_{n <= N} |lam(n)| / d(n)``; at most 1 by Deligne's theorem."""
    d = divisor_count_table(t.N)
    return float(np.max(np.abs(t.lam[1:]) / d[1:]))


def rankin_selberg_mass(t, x):
    """``sum_{n <= x} lam(n)^2``."""
    x = int(x)
    t.require(x)
    return float(np.sum(t.lam[1 : x + 1] ** 2))


def rankin_selberg_slope(t, grid):
    """
    Slope of ``log sum_{n <= X} lam(n)^2`` against ``log X``.

    :param grid: Increasing ``X`` values inside the table.
    :returns: The fitted exponent; close to 1 by Rankin-Selberg.
    :rtype: float
    :raises DegenerateGrid: on fewer than three grid points.
    """
    grid = [int(x) for x in grid]
    if len(grid) < 3:
        raise DegenerateGrid("Rankin-Selberg slope needs 3 grid points, got %d" % len(grid))
    t.require(max(grid))
    cumulative = np.cumsum(t.lam**2)
    return fit_exponent([(x, cumulative[x]) for x in grid]).slope


def short_interval_sum(t, x, y):
    """``sum_{x < n <= x + y} |lam(n)|``."""
    x, y = int(x), int(y)
    t.require(x + y)
    return float(np.sum(np.abs(t.lam[x + 1 : x + y + 1])))


def short_interval_constant(t, x, y, eps=0.05):
    """Recorded constant ``C`` in ``sum |lam| <= C (xy)^(1/2 + eps)``."""
    if x <= 0 or y <= 0:
        raise ValueError("x and y must be positive")
    return short_interval_sum(t, x, y) / (x * y) ** (0.5 + eps)
