# -*- coding: utf-8 -*-
"""
    thetatwist.circle
    ~~~~~~~~~~~~~~~~~

    The circle-method engine.

    ``S(X) = sum_n lam(n) chi(n) w(n/X) r(n)`` with box-truncated counts
    ``r`` equals ``int_0^1 F(alpha)^ell G(alpha) d alpha``. Both sides are
    finite sums, so the identity and its splitting into major and minor arcs
    are evaluated exactly, one frequency at a time.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BadDelta, BadParameters, HypothesisViolated
from .expsums import F_coeffs, F_eval, G_coeffs, G_mean_square, hua_count
from .ntheory import euler_phi, gcd
from .theta import r_ell, r_ell_box

logger = logging.getLogger("thetatwist")

__all__ = [
    "Arc",
    "ArcDecomposition",
    "dirichlet_approx",
    "build_arcs",
    "direct_sum",
    "product_poly",
    "integral_total",
    "ArcIntegrals",
    "arc_integrals",
    "choose_Q",
    "choose_Delta",
    "trivial_exponent",
    "heuristic_exponent",
    "theorem11_exponent",
    "theorem12_exponent",
    "theorem11_bound",
    "theorem12_bound",
    "minor_bound",
    "major_bound",
    "minor_sup_F",
    "cauchy_schwarz_minor",
]

#: Below this ``Q`` the smallest admissible denominator is found by exhaustion.
EXHAUSTIVE_Q = 100

TOLERANCE = 1e-12


def dirichlet_approx(alpha, Q):
    """
    Rational approximation by Dirichlet's lemma.

    :param alpha: Real number.
    :param Q: Bound, at least 1.
    :returns: ``(a, q, beta)`` with ``1 <= a <= q <= Q``, ``gcd(a, q) = 1``,
        ``|beta| <= 1/(qQ)`` and ``alpha = a/q + beta`` modulo 1.
    """
    if Q < 1:
        raise ValueError("Q must be at least 1, got %r" % Q)
    alpha = float(alpha)
    if Q <= EXHAUSTIVE_Q:
        qs = np.arange(1, int(Q) + 1)
        offsets = np.abs(alpha * qs - np.round(alpha * qs))
        q = int(qs[np.argmax(offsets <= 1.0 / Q + TOLERANCE)])
        a = int(round(alpha * q))
    else:
        a, q = _convergent(Fraction(alpha), Q)
    beta = alpha - a / q
    a %= q
    if a == 0:
        a = q
    return a, q, beta


def _convergent(x, Q):
    """First continued-fraction convergent ``p/q`` of ``x`` with ``|qx - p| <= 1/Q``."""
    target = x
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        digit = math.floor(x)
        p2, q2 = digit * p1 + p0, digit * q1 + q0
        if q2 > Q:
            break
        p0, q0, p1, q1 = p1, q1, p2, q2
        if abs(float(q1 * target - p1)) <= 1.0 / Q + TOLERANCE:
            break
        if x == digit:
            break
        x = 1 / (x - digit)
    return p1, q1


@dataclass(frozen=True)
class Arc:
    a: int
    q: int
    left: float
    right: float

    @property
    def center(self):
        return self.a / self.q

    @property
    def measure(self):
        return self.right - self.left


@dataclass
class ArcDecomposition:
    """
    Major arcs ``|alpha - a/q| <= 1/(qQ)`` for ``q <= P`` and the minor set.

    Everything lives in the window ``[1/Q, 1 + 1/Q]``. ``major`` holds the
    union of the arcs as disjoint intervals; ``minor`` is its complement.
    """

    P: int
    Q: float
    X: float
    arcs: list
    major: list
    minor: list
    overlaps: list = field(default_factory=list)

    @property
    def domain(self):
        return (1.0 / self.Q, 1.0 + 1.0 / self.Q)

    @property
    def major_measure(self):
        return sum(v - u for u, v in self.major)

    @property
    def minor_measure(self):
        return sum(v - u for u, v in self.minor)

    @property
    def disjoint(self):
        return not self.overlaps

    def expected_major_measure(self):
        return sum(euler_phi(q) * 2.0 / (q * self.Q) for q in range(1, self.P + 1))

    def contains_major(self, alpha):
        return any(u <= alpha <= v for u, v in self.major)


def build_arcs(P, Q, X):
    """
    Build the arc decomposition.

    :raises BadParameters: unless ``1 <= P < Q <= X``.
    """
    if not 1 <= P < Q <= X:
        raise BadParameters("need 1 <= P < Q <= X, got P=%s, Q=%s, X=%s" % (P, Q, X))
    P = int(math.floor(P))
    lo, hi = 1.0 / Q, 1.0 + 1.0 / Q
    arcs = []
    for q in range(1, P + 1):
        for a in range(1, q + 1):
            if gcd(a, q) != 1:
                continue
            radius = 1.0 / (q * Q)
            left = max(a / q - radius, lo)
            right = min(a / q + radius, hi)
            arcs.append(Arc(a, q, left, right))
    arcs.sort(key=lambda arc: arc.left)

    overlaps = []
    major = []
    reach = None
    for arc in arcs:
        if reach is not None and arc.left < reach.right:
            overlaps.append(((reach.a, reach.q), (arc.a, arc.q)))
        if reach is None or arc.right > reach.right:
            reach = arc
        if major and arc.left <= major[-1][1]:
            major[-1] = (major[-1][0], max(major[-1][1], arc.right))
        else:
            major.append((arc.left, arc.right))
    if overlaps:
        logger.warning(
            "[thetatwist] %d overlapping major arcs for P=%s, Q=%s (2P^2 > Q)",
            len(overlaps),
            P,
            Q,
        )

    minor = []
    cursor = lo
    for u, v in major:
        if u > cursor:
            minor.append((cursor, u))
        cursor = max(cursor, v)
    if cursor < hi:
        minor.append((cursor, hi))
    return ArcDecomposition(P=P, Q=Q, X=X, arcs=arcs, major=major, minor=minor, overlaps=overlaps)


def _terms(X, t, chi, w):
    lo, hi = int(math.floor(X / 2)) + 1, int(math.floor(X))
    t.require(hi)
    n = np.arange(lo, hi + 1)
    return n, t.lam[lo : hi + 1] * chi(n) * np.asarray(w(n / X))


def direct_sum(X, ell, t, chi, w, box=True):
    """
    ``S(X) = sum_{X/2 < n <= X} lam(n) chi(n) w(n/X) r(n)``.

    ``r`` is the box-truncated count (``box=True``) or the unrestricted
    ``r_ell``; the two agree for ``n <= X``.
    """
    if ell == 0:
        return 0j
    n, c = _terms(X, t, chi, w)
    if len(n) == 0:
        return 0j
    counts = r_ell_box(ell, X).counts if box else r_ell(ell, int(n[-1])).counts
    r = np.zeros(int(n[-1]) + 1, dtype=np.int64)
    top = min(len(counts), len(r))
    r[:top] = counts[:top]
    return complex(np.sum(c * r[n]))


def product_poly(X, ell, t, chi, w):
    """``F^ell G`` as a trigonometric polynomial."""
    return F_coeffs(X).power(ell).mul(G_coeffs(X, t, chi, w))


def integral_total(X, ell, t, chi, w):
    """``int_0^1 F^ell G``: the constant term of the product polynomial."""
    return complex(product_poly(X, ell, t, chi, w).constant_term())


@dataclass
class ArcIntegrals:
    major: complex
    minor: complex
    minor_direct: complex
    total: complex

    def __iter__(self):
        return iter((self.major, self.minor))

    @property
    def additivity_error(self):
        return abs(self.major + self.minor_direct - self.total) / (1.0 + abs(self.total))


def arc_integrals(ell, X, t, chi, w, arcs):
    """
    Integrals of ``F^ell G`` over the major and minor sets.

    ``minor`` is ``total - major``; ``minor_direct`` integrates over the
    complementary intervals, and the two agree up to rounding.
    """
    if not isinstance(arcs, ArcDecomposition):
        raise BadParameters("arcs must be an ArcDecomposition")
    poly = product_poly(X, ell, t, chi, w)
    total = complex(poly.constant_term())
    major = sum((poly.integrate(u, v) for u, v in arcs.major), 0j)
    minor_direct = sum((poly.integrate(u, v) for u, v in arcs.minor), 0j)
    logger.debug(
        "[thetatwist] arcs P=%s Q=%s: |major|=%.4g |minor|=%.4g",
        arcs.P,
        arcs.Q,
        abs(major),
        abs(total - major),
    )
    return ArcIntegrals(major=major, minor=total - major, minor_direct=minor_direct, total=total)


def choose_Q(p, X, delta, ell):
    """
    ``Q = p^(2/(l+3)) X^((l+1)/(l+3)) delta^(1/(l+3))`` and ``P = X/Q``.

    :raises HypothesisViolated: unless ``p < X`` and ``ell >= 3``.
    """
    if p >= X:
        raise HypothesisViolated("theorem requires p < X, got p=%s, X=%s" % (p, X))
    if ell < 3:
        raise HypothesisViolated("theorem requires ell >= 3, got %s" % ell)
    if delta < 1:
        raise BadDelta("delta must be at least 1, got %r" % delta)
    Q = p ** (2.0 / (ell + 3)) * X ** ((ell + 1.0) / (ell + 3)) * delta ** (1.0 / (ell + 3))
    Q = min(max(Q, 1.0), float(X))
    P = min(max(X / Q, 1.0), float(X))
    if not P < Q:
        raise HypothesisViolated("P=%g is not below Q=%g" % (P, Q))
    return P, Q


def choose_Delta(p, X, ell):
    """``delta = (X/p)^(2(l-2)/(2l+1))``, at least 1."""
    if p >= X:
        raise HypothesisViolated("theorem requires p < X, got p=%s, X=%s" % (p, X))
    if ell < 3:
        raise HypothesisViolated("theorem requires ell >= 3, got %s" % ell)
    return max(1.0, (X / p) ** (2.0 * (ell - 2) / (2 * ell + 1)))


def trivial_exponent(ell):
    return ell / 2.0


def heuristic_exponent(ell):
    return (ell - 1) / 2.0


def theorem11_exponent(ell):
    return ell / 2.0 - (ell - 2.0) / (ell + 3)


def theorem12_exponent(ell):
    return ell / 2.0 - (ell - 2.0) / (2 * ell + 1)


def theorem11_bound(X, ell, p, delta):
    """``p^((l-2)/(l+3)) delta^((l-2)/(2(l+3))) X^(theorem exponent)``."""
    return (
        p ** ((ell - 2.0) / (ell + 3))
        * delta ** ((ell - 2.0) / (2 * (ell + 3)))
        * X ** theorem11_exponent(ell)
    )


def theorem12_bound(X, ell, p):
    """``p^((l-2)/(2l+1)) X^(theorem exponent)``."""
    return p ** ((ell - 2.0) / (2 * ell + 1)) * X ** theorem12_exponent(ell)


def minor_bound(X, ell, P, Q):
    """``X^(l/2) P^((2-l)/2) + X^((l+2)/4) + X Q^((l-2)/2)``."""
    return X ** (ell / 2.0) * P ** ((2.0 - ell) / 2) + X ** ((ell + 2.0) / 4) + X * Q ** ((ell - 2.0) / 2)


def major_bound(X, ell, p, P, Q, delta):
    """``p (1 + X/(PQ)) (X^((1+l)/2) P Q^(-3/2) + X^(l/2) P^(3/2) delta^(1/2) / Q)``."""
    return (
        p
        * (1.0 + X / (P * Q))
        * (X ** ((1.0 + ell) / 2) * P / Q**1.5 + X ** (ell / 2.0) * P**1.5 * math.sqrt(delta) / Q)
    )


def minor_sup_F(X, arcs, samples=4096):
    """
    Sampled ``sup |F|`` over the minor set, with the Weyl shape
    ``X^(1/2) P^(-1/2) + X^(1/4) + Q^(1/2)``.

    :returns: ``(sup, shape)``.
    """
    points = []
    total = arcs.minor_measure
    if total <= 0:
        return 0.0, 0.0
    for u, v in arcs.minor:
        count = max(2, int(math.ceil(samples * (v - u) / total)))
        points.append(np.linspace(u, v, count))
    alpha = np.concatenate(points)
    sup = float(np.max(np.abs(F_eval(alpha, X))))
    shape = math.sqrt(X) / math.sqrt(arcs.P) + X**0.25 + math.sqrt(arcs.Q)
    return sup, shape


def cauchy_schwarz_minor(ell, X, t, chi, w, arcs, samples=4096):
    """
    ``sup_m |F|^(l-2) (int |F|^4)^(1/2) (int |G|^2)^(1/2)`` against the
    measured ``|int_m F^l G|``.

    :returns: ``(measured, bound)``; the bound always dominates.
    """
    measured = abs(arc_integrals(ell, X, t, chi, w, arcs).minor_direct)
    # |F| never exceeds 2M + 1, the sum of its coefficients
    sup = float(np.sum(np.abs(F_coeffs(X).coeffs)))
    sup_minor, _ = minor_sup_F(X, arcs, samples)
    logger.debug("[thetatwist] sampled minor sup %.4g of %.4g", sup_minor, sup)
    bound = sup ** (ell - 2) * math.sqrt(hua_count(X)) * math.sqrt(G_mean_square(X, t, chi, w))
    return measured, bound
