# -*- coding: utf-8 -*-
"""
    thetatwist.theta
    ~~~~~~~~~~~~~~~~

    Representation counts ``r_ell(n)`` of ``n`` as a sum of ``ell`` squares,
    the coefficients of the ``ell``-th power of the Jacobi theta series, in an
    unrestricted form and in the box-truncated form that appears when
    ``F(alpha)**ell`` is expanded.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateGrid, ResourceLimit
from .fitting import fit_exponent
from .ntheory import divisors

logger = logging.getLogger("thetatwist")

__all__ = [
    "ThetaCounts",
    "DEFAULT_MAX_SUPPORT",
    "r_ell",
    "r_ell_box",
    "r2_oracle",
    "r_bound_slope",
    "trivial_bound",
    "trivial_bound_ratio",
]

#: Largest count vector built without an explicit ``limit``.
DEFAULT_MAX_SUPPORT = 10_000_000


@dataclass(frozen=True)
class ThetaCounts:
    """
    Counts ``r_ell(0..N)``.

    :ivar ell: number of squares.
    :ivar N: last index stored.
    :ivar counts: ``int64`` array of length ``N + 1``.
    :ivar truncated: whether every coordinate was restricted to ``|m_i| <= box``.
    :ivar box: the coordinate bound for truncated counts.
    """

    ell: int
    N: int
    counts: np.ndarray
    truncated: bool = False
    box: Optional[int] = None

    def __post_init__(self):
        self.counts.setflags(write=False)

    def __getitem__(self, n):
        return int(self.counts[n])

    def __len__(self):
        return len(self.counts)

    def total(self):
        return int(self.counts.sum())


def _r1_weights(M):
    # (shift, multiplicity) pairs of the r_1 support: 0 once, k^2 twice
    return [(0, 1)] + [(k * k, 2) for k in range(1, M + 1)]


def _fold_counts(ell, length, M):
    weights = _r1_weights(M)
    counts = np.zeros(length, dtype=np.int64)
    for shift, mult in weights:
        if shift < length:
            counts[shift] = mult
    for _ in range(ell - 1):
        acc = np.zeros(length, dtype=np.int64)
        for shift, mult in weights:
            if shift >= length:
                break
            acc[shift:] += mult * counts[: length - shift]
        counts = acc
    return counts


def r_ell(ell, N, limit=DEFAULT_MAX_SUPPORT):
    """
    Exact counts ``r_ell(n)`` for ``0 <= n <= N``.

    :param ell: Number of squares, at least 1.
    :type ell: int
    :param N: Truncation, at least 0.
    :type N: int
    :param limit: Largest admissible ``N``.
    :rtype: ThetaCounts
    :raises ResourceLimit: if ``N`` exceeds ``limit``.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1, got %r" % ell)
    if N < 0:
        raise ValueError("N must be nonnegative, got %r" % N)
    if N > limit:
        raise ResourceLimit("r_%d up to %d exceeds the limit %d" % (ell, N, limit))
    logger.debug("[thetatwist] r_%d counts up to %d", ell, N)
    counts = _fold_counts(ell, N + 1, math.isqrt(N))
    return ThetaCounts(ell=ell, N=N, counts=counts)


def r_ell_box(ell, X, limit=DEFAULT_MAX_SUPPORT):
    """
    Counts of ``n = m_1^2 + ... + m_ell^2`` with every ``|m_i| <= floor(sqrt(X))``.

    The result has support ``[0, ell * M**2]`` with ``M = floor(sqrt(X))``;
    these are the coefficients of ``F(alpha)**ell``.

    :raises ResourceLimit: if the support exceeds ``limit``.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1, got %r" % ell)
    M = math.isqrt(int(math.floor(X))) if X >= 1 else 0
    support = ell * M * M
    if support > limit:
        raise ResourceLimit(
            "box counts for ell=%d, X=%s need %d entries (limit %d)"
            % (ell, X, support + 1, limit)
        )
    counts = _fold_counts(ell, support + 1, M)
    return ThetaCounts(ell=ell, N=support, counts=counts, truncated=True, box=M)


def r2_oracle(n):
    """``r_2(n) = 4 * sum_{d | n} chi_{-4}(d)`` by divisors."""
    if n < 1:
        raise ValueError("r2_oracle expects n >= 1, got %r" % n)
    total = 0
    for d in divisors(n):
        if d % 4 == 1:
            total += 1
        elif d % 4 == 3:
            total -= 1
    return 4 * total


def r_bound_slope(ell, N, xmin=None):
    """
    Fitted exponent of ``max_{n <= X} r_ell(n)`` over dyadic ``X <= N``.

    The envelope ``r_ell(n) << n^(ell/2 - 1 + eps)`` predicts a value near
    ``ell/2 - 1`` for ``ell >= 3``.
    The dyadic grid starts at ``xmin``, by default ``min(64, N // 4)``.

    :raises DegenerateGrid: when fewer than three dyadic points fit below ``N``.
    """
    if N < 100:
        raise DegenerateGrid("r_bound_slope needs N >= 100, got %d" % N)
    counts = r_ell(ell, N).counts
    envelope = np.maximum.accumulate(counts)
    grid = []
    x = min(64, N // 4) if xmin is None else xmin
    while x <= N:
        grid.append(x)
        x *= 2
    return fit_exponent([(x, envelope[x]) for x in grid]).slope


def trivial_bound(ell, X, t, w):
    """
    Cauchy-Schwarz bound ``sqrt(sum lam^2 w^2) * sqrt(sum r_ell^2)``.

    Both sums run over ``X/2 < n <= X``; ``w`` is any callable weight on
    ``[1/2, 1]``.
    """
    lo, hi = int(math.floor(X / 2)) + 1, int(math.floor(X))
    t.require(hi)
    if hi < lo:
        return 0.0
    n = np.arange(lo, hi + 1)
    r = r_ell(ell, hi).counts[lo:].astype(np.float64)
    weights = np.asarray(w(n / X), dtype=np.float64)
    return math.sqrt(np.sum((t.lam[lo : hi + 1] * weights) ** 2)) * math.sqrt(
        np.sum(r**2)
    )


def trivial_bound_ratio(value, ell, X, t, w):
    """``|value|`` relative to :func:`trivial_bound`."""
    bound = trivial_bound(ell, X, t, w)
    return abs(value) / bound if bound else 0.0
