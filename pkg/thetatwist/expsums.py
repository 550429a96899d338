# -*- coding: utf-8 -*-
"""
    thetatwist.expsums
    ~~~~~~~~~~~~~~~~~~

    The generating sums of the circle method:

    * ``F(alpha) = sum_{|m| <= sqrt(X)} e(alpha m^2)``, the quadratic Weyl sum;
    * ``G(alpha) = sum_n lam(n) chi(n) e(-alpha n) w(n/X)``, the twisted
      coefficient sum.

    Both are finite exponential sums and are also available as
    :class:`TrigPoly` objects, which multiply by convolution and integrate
    exactly over any subinterval of the circle.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .errors import BadDelta, TableTooShort
from .fitting import fit_exponent
from .theta import r_ell_box

logger = logging.getLogger("thetatwist")

__all__ = [
    "SmoothWeight",
    "TrigPoly",
    "make_weight",
    "weight_derivative_constants",
    "F_eval",
    "F_coeffs",
    "G_eval",
    "G_coeffs",
    "G_mean_square",
    "G_mean_square_slope",
    "weyl_ratio",
    "hua_count",
    "hua_quadrature",
]


def _glue(t):
    """Smooth step ``exp(-1/t) / (exp(-1/t) + exp(-1/(1-t)))`` clipped to [0, 1]."""
    t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
    inner = (t > 0) & (t < 1)
    safe = np.where(inner, t, 0.5)
    left = np.exp(-1.0 / safe)
    right = np.exp(-1.0 / (1.0 - safe))
    return np.where(inner, left / (left + right), np.where(t >= 1, 1.0, 0.0))


@dataclass(frozen=True)
class SmoothWeight:
    """
    Plateau bump on ``[1/2, 1]``.

    ``w = 1`` on ``[1/2 + 1/(8 delta), 1 - 1/(8 delta)]`` with smooth
    transitions of width ``1/(8 delta)`` on either side.
    """

    delta: float

    @property
    def width(self):
        return 1.0 / (8.0 * self.delta)

    @property
    def breakpoints(self):
        return (0.5, 0.5 + self.width, 1.0 - self.width, 1.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        rise = _glue((x - 0.5) / self.width)
        fall = _glue((1.0 - x) / self.width)
        out = np.minimum(rise, fall)
        out = np.where((x <= 0.5) | (x >= 1.0), 0.0, out)
        return out if out.ndim else float(out)


def make_weight(delta):
    """
    Build the plateau weight with parameter ``delta``.

    :raises BadDelta: if ``delta < 1``.
    """
    if not delta >= 1:
        raise BadDelta("delta must be at least 1, got %r" % (delta,))
    return SmoothWeight(float(delta))


def weight_derivative_constants(w, jmax=3, resolution=2048):
    """
    Finite-difference derivative constants of a weight.

    Returns ``{j: (C_j, D_j)}`` with ``C_j = sup |w^(j)| / delta^j`` and
    ``D_j = int |w^(j)| / delta^(j-1)``. Both stay bounded as ``delta`` grows.
    """
    h = w.width / resolution
    x = np.arange(0.5, 1.0 + h, h)
    values = w(x)
    constants = {}
    for j in range(1, jmax + 1):
        values = np.gradient(values, h)
        sup = float(np.max(np.abs(values)))
        mass = float(trapezoid(np.abs(values), dx=h))
        constants[j] = (sup / w.delta**j, mass / w.delta ** (j - 1))
    return constants


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """
    Finite sum ``sum_k coeffs[k] e((lo + k) alpha)``.
    """

    lo: int
    coeffs: np.ndarray

    @property
    def hi(self):
        return self.lo + len(self.coeffs) - 1

    @property
    def frequencies(self):
        return np.arange(self.lo, self.hi + 1)

    def coefficient(self, k):
        if self.lo <= k <= self.hi:
            return self.coeffs[k - self.lo]
        return 0

    def __call__(self, alpha):
        return self.eval(alpha)

    def eval(self, alpha):
        """Evaluate at a scalar or an array of ``alpha``."""
        alpha = np.asarray(alpha, dtype=np.float64)
        k = self.frequencies
        phases = np.exp(2j * np.pi * np.outer(np.ravel(alpha), k))
        out = phases @ self.coeffs
        return out.reshape(alpha.shape) if alpha.ndim else complex(out[0])

    def mul(self, other):
        return TrigPoly(self.lo + other.lo, np.convolve(self.coeffs, other.coeffs))

    __mul__ = mul

    def power(self, k):
        if k < 0:
            raise ValueError("negative powers are not trigonometric polynomials")
        result = TrigPoly(0, np.ones(1, dtype=self.coeffs.dtype))
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result

    def constant_term(self):
        return self.coefficient(0)

    def integrate(self, u, v):
        """
        Exact ``int_u^v`` of the polynomial.

        ``int e(k alpha) = (e(k v) - e(k u)) / (2 pi i k)`` for ``k != 0`` and
        ``v - u`` for ``k = 0``.
        """
        k = self.frequencies
        nonzero = k != 0
        kernel = np.empty(len(k), dtype=np.complex128)
        kz = k[nonzero]
        kernel[nonzero] = (
            np.exp(2j * np.pi * kz * v) - np.exp(2j * np.pi * kz * u)
        ) / (2j * np.pi * kz)
        kernel[~nonzero] = v - u
        return complex(np.dot(self.coeffs, kernel))


def _box(X):
    return math.isqrt(int(math.floor(X))) if X >= 1 else 0


def F_eval(alpha, X):
    """Direct evaluation of ``F(alpha)`` over ``|m| <= floor(sqrt(X))``."""
    M = _box(X)
    m2 = np.arange(-M, M + 1, dtype=np.float64) ** 2
    alpha = np.asarray(alpha, dtype=np.float64)
    phases = np.mod(np.outer(np.ravel(alpha), m2), 1.0)
    out = np.exp(2j * np.pi * phases).sum(axis=1)
    return out.reshape(alpha.shape) if alpha.ndim else complex(out[0])


def F_coeffs(X):
    """``F`` as a trigonometric polynomial with integer coefficients at ``m^2``."""
    return TrigPoly(0, r_ell_box(1, X).counts.copy())


def _window(X, t):
    lo, hi = int(math.floor(X / 2)) + 1, int(math.floor(X))
    if t.N < hi:
        raise TableTooShort("table of length %d does not cover X=%s" % (t.N, X))
    return lo, hi


def _g_terms(X, t, chi, w):
    lo, hi = _window(X, t)
    if hi < lo:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.complex128)
    n = np.arange(lo, hi + 1)
    c = t.lam[lo : hi + 1] * chi(n) * np.asarray(w(n / X))
    return n, c


def G_eval(alpha, X, t, chi, w):
    """
    Direct evaluation of ``G(alpha)`` over ``X/2 < n <= X``.

    :raises TableTooShort: if the table does not reach ``X``.
    """
    n, c = _g_terms(X, t, chi, w)
    alpha = np.asarray(alpha, dtype=np.float64)
    if len(n) == 0:
        return np.zeros(alpha.shape, dtype=np.complex128) if alpha.ndim else 0j
    phases = np.mod(-np.outer(np.ravel(alpha), n.astype(np.float64)), 1.0)
    out = np.exp(2j * np.pi * phases) @ c
    return out.reshape(alpha.shape) if alpha.ndim else complex(out[0])


def G_coeffs(X, t, chi, w):
    """``G`` as a trigonometric polynomial with coefficient ``lam chi w`` at ``-n``."""
    n, c = _g_terms(X, t, chi, w)
    if len(n) == 0:
        return TrigPoly(0, np.zeros(1, dtype=np.complex128))
    return TrigPoly(-int(n[-1]), np.ascontiguousarray(c[::-1]))


def G_mean_square(X, t, chi, w):
    """Parseval ``int_0^1 |G|^2 = sum |lam(n) chi(n) w(n/X)|^2``."""
    _, c = _g_terms(X, t, chi, w)
    return float(np.sum(np.abs(c) ** 2))


def G_mean_square_slope(grid, t, chi, w):
    """Fitted exponent of :func:`G_mean_square` against ``X``; near 1."""
    return fit_exponent([(X, G_mean_square(X, t, chi, w)) for X in grid])


def weyl_ratio(alpha, q, X):
    """``|F(alpha)| / (sqrt(X) (1/q + X^-1/2 + q/X)^1/2)``."""
    bound = math.sqrt(X) * math.sqrt(1.0 / q + X**-0.5 + q / X)
    return abs(F_eval(alpha, X)) / bound


def hua_count(X):
    """
    Exact fourth moment ``int_0^1 |F|^4``.

    Counts ``m1^2 + m2^2 = m3^2 + m4^2`` with ``|m_i| <= floor(sqrt(X))``.
    """
    counts = r_ell_box(2, X).counts
    return int(np.sum(counts * counts))


def hua_quadrature(X):
    """
    Fourth moment by a uniform Riemann sum of ``|F|^4``.

    The grid has ``8 M^2 + 1`` points, more than the bandwidth ``4 M^2`` of
    ``|F|^4``, so the sum is exact up to rounding.
    """
    M = _box(X)
    K = 8 * M * M + 1
    c = np.zeros(K, dtype=np.complex128)
    c[: M * M + 1] = r_ell_box(1, X).counts
    values = np.fft.ifft(c) * K
    return int(round(float(np.mean(np.abs(values) ** 4))))
