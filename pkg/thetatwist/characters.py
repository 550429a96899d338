# -*- coding: utf-8 -*-
"""
    thetatwist.characters
    ~~~~~~~~~~~~~~~~~~~~~

    Dirichlet characters modulo a prime, Gauss sums, Kloosterman sums and
    the composite character sum of the major-arc analysis, both by direct
    summation and through its closed form
    ``S(M, n pbar^2; q) * conj(chi)(-n qbar^2) * tau(chi)``.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModuliNotCoprime, NotPrime, TrivialCharacter
from .ntheory import divisor_count, gcd, gcd3, is_prime, primitive_root

logger = logging.getLogger("thetatwist")

__all__ = [
    "CharTable",
    "build_char",
    "gauss_sum",
    "char_fourier_check",
    "kloosterman",
    "kloosterman_table",
    "weil_ratio",
    "charsum_brute",
    "charsum_closed",
    "charsum_table",
    "charsum_bound_ratio",
]

#: Tolerance on the imaginary part of a Kloosterman sum.
IMAG_TOLERANCE = 1e-10


def _e(numerators, modulus):
    """``exp(2 pi i k / modulus)`` for integers ``k`` reduced first."""
    k = np.mod(numerators, modulus)
    return np.exp(2j * np.pi * k / modulus)


@dataclass(frozen=True, eq=False)
class CharTable:
    """
    A Dirichlet character modulo the odd prime ``p``.

    ``values[n]`` holds ``chi(n)`` for ``0 <= n < p`` with
    ``chi(g**k) = e(j k / (p - 1))`` for the smallest primitive root ``g``.
    """

    p: int
    j: int
    g: int
    values: np.ndarray
    gauss: complex

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def trivial(self):
        return self.j == 0

    def __call__(self, n):
        return self.values[np.mod(n, self.p)]

    def conj(self, n):
        return np.conj(self.values[np.mod(n, self.p)])

    def require_primitive(self):
        if self.trivial:
            raise TrivialCharacter(
                "the principal character mod %d is not primitive" % self.p
            )

    def __repr__(self):
        return "<CharTable: p=%d, j=%d, g=%d>" % (self.p, self.j, self.g)


def build_char(p, j):
    """
    Build the character of index ``j`` modulo ``p``.

    :param p: Odd prime.
    :type p: int
    :param j: Index in ``[0, p - 1)``. ``j = 0`` gives the principal
        character, which is returned with ``trivial`` set.
    :type j: int
    :rtype: CharTable
    :raises NotPrime: if ``p`` is not an odd prime.
    """
    if p < 3 or not is_prime(p):
        raise NotPrime("%d is not an odd prime" % p)
    if not 0 <= j < p - 1:
        raise ValueError("character index must lie in [0, %d), got %r" % (p - 1, j))
    g = primitive_root(p)
    # discrete logarithm table: ind[g^k mod p] = k
    ind = np.zeros(p, dtype=np.int64)
    power = 1
    for k in range(p - 1):
        ind[power] = k
        power = power * g % p
    values = np.zeros(p, dtype=np.complex128)
    values[1:] = _e(j * ind[1:], p - 1)
    b = np.arange(p)
    gauss = complex(np.sum(values * _e(b, p)))
    if j == 0:
        logger.debug("[thetatwist] principal character mod %d built", p)
    return CharTable(p=p, j=j, g=g, values=values, gauss=gauss)


def gauss_sum(chi):
    """
    ``tau(chi) = sum_{b mod p} chi(b) e(b/p)``.

    :raises TrivialCharacter: for the principal character.
    """
    chi.require_primitive()
    return chi.gauss


def char_fourier_check(chi, n):
    """
    Discrepancy of the additive expansion of ``chi``.

    Returns ``|chi(n) - tau(conj chi)^-1 sum_b conj(chi)(b) e(bn/p)|``.
    """
    chi.require_primitive()
    b = np.arange(chi.p)
    conj_values = np.conj(chi.values)
    tau_conj = np.sum(conj_values * _e(b, chi.p))
    expansion = np.sum(conj_values * _e(b * n, chi.p)) / tau_conj
    return float(abs(chi(n) - expansion))


def _units(q):
    x = np.arange(q, dtype=np.int64)
    return x[np.gcd(x, q) == 1]


def _inverses(units, q):
    return np.array([pow(int(x), -1, q) for x in units], dtype=np.int64)


def kloosterman_table(q):
    """
    Matrix ``S[a, b] = S(a, b; q)`` for ``0 <= a, b < q``.

    Built as ``E1 @ E2.T`` with ``E1[a, x] = e(ax/q)`` and
    ``E2[b, x] = e(b xbar/q)`` over the units ``x`` modulo ``q``.
    """
    if q < 1:
        raise ValueError("modulus must be positive, got %r" % q)
    if q == 1:
        return np.ones((1, 1))
    x = _units(q)
    xbar = _inverses(x, q)
    r = np.arange(q, dtype=np.int64)[:, None]
    table = _e(r * x[None, :], q) @ _e(r * xbar[None, :], q).T
    worst = float(np.max(np.abs(table.imag)))
    if worst > IMAG_TOLERANCE:
        logger.warning(
            "[thetatwist] Kloosterman table mod %d has imaginary part %.3g", q, worst
        )
    return table.real.copy()


def kloosterman(a, b, q):
    """
    Kloosterman sum ``S(a, b; q) = sum*_{x mod q} e((a x + b xbar)/q)``.

    ``S(a, b; 1) = 1``. The value is real; the imaginary part is checked
    against :data:`IMAG_TOLERANCE` and dropped.
    """
    if q < 1:
        raise ValueError("modulus must be positive, got %r" % q)
    if q == 1:
        return 1.0
    x = _units(q)
    xbar = _inverses(x, q)
    total = complex(np.sum(_e(a * x + b * xbar, q)))
    if abs(total.imag) > IMAG_TOLERANCE:
        logger.warning(
            "[thetatwist] S(%d, %d; %d) has imaginary part %.3g", a, b, q, total.imag
        )
    return total.real


def weil_ratio(a, b, q):
    """``|S(a, b; q)| / (d(q) sqrt(q) sqrt(gcd(a, b, q)))``."""
    return abs(kloosterman(a, b, q)) / (
        divisor_count(q) * math.sqrt(q) * math.sqrt(gcd3(a, b, q))
    )


def _require_coprime(q, chi):
    if q < 1:
        raise ValueError("modulus must be positive, got %r" % q)
    if gcd(q, chi.p) != 1:
        raise ModuliNotCoprime("q=%d shares a factor with p=%d" % (q, chi.p))
    chi.require_primitive()


def _brute_inner(ns, q, chi):
    """``inner[a, n] = sum_b conj(chi)(b) e(-cbar n / pq)`` with ``c = bq - ap``."""
    p = chi.p
    pq = p * q
    a = _units(q) if q > 1 else np.zeros(1, dtype=np.int64)
    b = np.arange(1, p, dtype=np.int64)
    c = np.mod(b[None, :] * q - a[:, None] * p, pq)
    inverse = np.zeros(pq, dtype=np.int64)
    units = _units(pq)
    inverse[units] = _inverses(units, pq)
    cbar = inverse[c]
    conj_chi = np.conj(chi.values[b])
    ns = np.asarray(ns, dtype=np.int64)
    phases = _e(-cbar[:, :, None] * ns[None, None, :], pq)
    inner = np.einsum("abn,b->an", phases, conj_chi)
    return a, inner


def charsum_table(q, chi, ns, Ms, method="brute"):
    """
    Character sums ``C(n, M)`` over grids of ``n`` and ``M``.

    :param method: ``"brute"`` for the double sum, ``"closed"`` for the
        Kloosterman closed form.
    :returns: Complex array of shape ``(len(ns), len(Ms))``.
    """
    _require_coprime(q, chi)
    ns = np.asarray(ns, dtype=np.int64)
    Ms = np.asarray(Ms, dtype=np.int64)
    if method == "brute":
        a, inner = _brute_inner(ns, q, chi)
        outer = _e(a[:, None] * Ms[None, :], q)
        return inner.T @ outer
    if method != "closed":
        raise ValueError("unknown method %r" % method)
    p = chi.p
    pbar = pow(p, -1, q) if q > 1 else 0
    qbar = pow(q, -1, p)
    S = kloosterman_table(q)
    second = np.mod(ns * pbar * pbar, q)
    kl = S[np.mod(Ms, q)[None, :], second[:, None]]
    char = np.conj(chi.values[np.mod(-ns * qbar * qbar, p)])
    return kl * char[:, None] * chi.gauss


def charsum_brute(n, M, q, chi):
    """
    Direct evaluation of
    ``sum*_{a mod q} e(Ma/q) sum_{b mod p} conj(chi)(b) e(-cbar n / pq)``
    with ``c = bq - ap``.

    For ``q = 1`` the outer sum has the single term ``a = 0``.

    :raises ModuliNotCoprime: if ``gcd(q, p) != 1``.
    :raises TrivialCharacter: for the principal character.
    """
    return complex(charsum_table(q, chi, [n], [M], method="brute")[0, 0])


def charsum_closed(n, M, q, chi):
    """
    Closed form ``S(M, n pbar^2; q) conj(chi)(-n qbar^2) tau(chi)``.

    ``pbar`` inverts ``p`` modulo ``q`` and ``qbar`` inverts ``q`` modulo ``p``.

    :raises ModuliNotCoprime: if ``gcd(q, p) != 1``.
    """
    return complex(charsum_table(q, chi, [n], [M], method="closed")[0, 0])


def charsum_bound_ratio(n, M, q, chi):
    """``|C| / (sqrt(p) d(q) sqrt(q) sqrt(gcd(n, q)))``."""
    value = charsum_closed(n, M, q, chi)
    return abs(value) / (
        math.sqrt(chi.p) * divisor_count(q) * math.sqrt(q) * math.sqrt(gcd(n, q))
    )
