# -*- coding: utf-8 -*-
"""
    thetatwist.ntheory
    ~~~~~~~~~~~~~~~~~~

    Elementary arithmetic shared by all modules: gcd, modular inverses,
    divisor functions, the Moebius function, primality and primitive roots.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotInvertible, NotPrime

logger = logging.getLogger("thetatwist")

__all__ = [
    "Residue",
    "gcd",
    "gcd3",
    "mod_inverse",
    "factorize",
    "divisors",
    "divisor_count",
    "euler_phi",
    "moebius",
    "is_prime",
    "primitive_root",
    "prime_sieve",
    "divisor_count_table",
    "moebius_table",
]

#: Largest modulus accepted by the trial-division primality test.
MAX_TRIAL_MODULUS = 10**12


@dataclass(frozen=True)
class Residue:
    """A residue class ``value mod modulus`` with ``0 <= value < modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive, got %r" % self.modulus)
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


def gcd(a, b):
    """Greatest common divisor, with ``gcd(0, 0) == 0``."""
    return math.gcd(int(a), int(b))


def gcd3(a, b, c):
    """Greatest common divisor of three integers."""
    return math.gcd(math.gcd(int(a), int(b)), int(c))


def mod_inverse(a, m):
    """
    Inverse of ``a`` modulo ``m``.

    :param a: Integer to invert.
    :type a: int
    :param m: Modulus, at least 2.
    :type m: int
    :returns: The residue ``x`` with ``a*x = 1 (mod m)``.
    :rtype: Residue
    :raises NotInvertible: if ``gcd(a, m) != 1``.
    """
    if m < 2:
        raise NotInvertible("modulus must be at least 2, got %d" % m)
    try:
        x = pow(int(a), -1, int(m))
    except ValueError:
        raise NotInvertible(
            "%d is not invertible modulo %d (gcd %d)" % (a, m, gcd(a, m))
        ) from None
    return Residue(x, m)


@lru_cache(maxsize=4096)
def _factorize(n):
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return tuple(factors)


def factorize(n):
    """Prime factorization of ``n >= 1`` as a list of ``(prime, exponent)``."""
    if n < 1:
        raise ValueError("factorize expects n >= 1, got %r" % n)
    return list(_factorize(int(n)))


def divisors(n):
    """Sorted list of the positive divisors of ``n``."""
    divs = [1]
    for prime, exp in factorize(n):
        divs = [d * prime**k for d in divs for k in range(exp + 1)]
    return sorted(divs)


def divisor_count(n):
    """Number of positive divisors ``d(n)``."""
    count = 1
    for _, exp in factorize(n):
        count *= exp + 1
    return count


def euler_phi(n):
    """Euler's totient."""
    phi = n
    for prime, _ in factorize(n):
        phi = phi // prime * (prime - 1)
    return phi


def moebius(n):
    """Moebius function ``mu(n)``."""
    factors = factorize(n)
    if any(exp > 1 for _, exp in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def is_prime(n):
    """Deterministic primality by trial division."""
    n = int(n)
    if n < 2:
        return False
    if n > MAX_TRIAL_MODULUS:
        raise NotPrime("primality of %d is outside the trial-division range" % n)
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=256)
def primitive_root(p):
    """
    Smallest generator of the multiplicative group modulo an odd prime.

    :param p: Odd prime.
    :type p: int
    :returns: Smallest ``g >= 2`` of multiplicative order ``p - 1``.
    :rtype: int
    :raises NotPrime: if ``p`` is not an odd prime.
    """
    if p < 3 or not is_prime(p):
        raise NotPrime("%d is not an odd prime" % p)
    cofactors = [(p - 1) // r for r, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, c, p) != 1 for c in cofactors):
            return g
    raise NotPrime("no primitive root found modulo %d" % p)  # pragma: no cover


def prime_sieve(N):
    """Boolean array ``is_p`` with ``is_p[n]`` true iff ``n <= N`` is prime."""
    is_p = np.ones(N + 1, dtype=bool)
    is_p[:2] = False
    for k in range(2, math.isqrt(N) + 1):
        if is_p[k]:
            is_p[k * k :: k] = False
    return is_p


def divisor_count_table(N):
    """Array ``d`` with ``d[n]`` the divisor count for ``1 <= n <= N``."""
    d = np.zeros(N + 1, dtype=np.int64)
    for k in range(1, N + 1):
        d[k::k] += 1
    return d


def moebius_table(N):
    """Array ``mu`` with ``mu[n]`` the Moebius function for ``1 <= n <= N``."""
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    for prime in np.flatnonzero(prime_sieve(N)):
        prime = int(prime)
        mu[prime::prime] *= -1
        mu[prime * prime :: prime * prime] = 0
    logger.debug("[thetatwist] moebius table built up to %d", N)
    return mu
