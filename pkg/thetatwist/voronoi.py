# -*- coding: utf-8 -*-
"""
    thetatwist.voronoi
    ~~~~~~~~~~~~~~~~~~

    Voronoi summation for the level 1 holomorphic form and the integral
    transform ``Phi`` in its dual sum.

    ``Phi`` is computed two ways:

    * as a Mellin-Barnes integral
      ``i^(k-1) / (2 pi^2) int_(sigma) (pi^2 x)^-s rho(s) phi~(-s) ds``,
      evaluated on a vertical line with an FFT-sampled Mellin transform;
    * as the Bessel-kernel integral
      ``2 pi i^k x int phi(y) J_(k-1)(4 pi sqrt(xy)) dy`` by adaptive
      trapezoidal refinement.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, special

from .errors import (
    ContourOutOfRange,
    DegenerateGrid,
    QuadratureFailure,
    TruncationTooSmall,
)
from .expsums import SmoothWeight, make_weight
from .fitting import FitResult, fit_exponent
from .ntheory import gcd, mod_inverse

logger = logging.getLogger("thetatwist")

__all__ = [
    "TestFunction",
    "GammaRatio",
    "RegimeReport",
    "make_test_function",
    "gamma_ratio",
    "mellin_transform",
    "phi_mellin",
    "phi_bessel_oracle",
    "calibrate",
    "oracle_agreement",
    "contour_shift_discrepancy",
    "negligible_threshold",
    "voronoi_truncation",
    "voronoi_sides",
    "voronoi_identity_residual",
    "oscillatory_window",
    "phi_beta_regimes",
    "gcd_weighted_mass_slope",
]

#: Multiplier on ``(delta + |beta| X)^2 / X`` beyond which ``Phi`` is negligible.
NEGLIGIBLE_CONSTANT = 128.0

#: Lower edge of the oscillatory range of ``Phi``, in units of ``sqrt(xX)``.
OSCILLATORY_ONSET = 20.0

#: Period of the log-variable grid used by :func:`phi_mellin`.
LOG_PERIOD = 24.0

MELLIN_MIN_NODES = 2**12
MELLIN_MAX_NODES = 2**21
ORACLE_MIN_NODES = 2**8
ORACLE_MAX_NODES = 2**22

# complex entries held at once by the Mellin-Barnes kernel matrix
KERNEL_BUDGET = 2**22


@dataclass(frozen=True)
class TestFunction:
    """
    Compactly supported test function ``phi(u) = e(-u beta) window(u / X)``.

    ``kind`` is ``"plateau"`` (the weight :class:`~thetatwist.expsums.SmoothWeight`
    with parameter ``delta``) or ``"gaussian"`` (a Gaussian of width ``X / R``
    centered at ``3X/4``, multiplied by the plateau weight with ``delta = 1``).
    Derivatives scale like ``(X / R)^-j``.
    """

    __test__ = False

    kind: str
    X: float
    R: float
    beta: float = 0.0
    weight: SmoothWeight = field(default=None, repr=False)

    @property
    def support(self):
        return (0.5 * self.X, self.X)

    @property
    def breakpoints(self):
        return tuple(self.X * x for x in self.weight.breakpoints)

    @property
    def center(self):
        return 0.75 * self.X

    @property
    def width(self):
        return self.X / self.R

    def window(self, u):
        u = np.asarray(u, dtype=np.float64)
        base = np.asarray(self.weight(u / self.X), dtype=np.float64)
        if self.kind == "gaussian":
            base = base * np.exp(-0.5 * ((u - self.center) / self.width) ** 2)
        return base

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        out = self.window(u)
        if self.beta:
            out = out * np.exp(-2j * np.pi * np.mod(u * self.beta, 1.0))
        return out

    def gaussian_mass(self):
        """``int phi`` of the untruncated Gaussian, for ``kind == "gaussian"``."""
        return self.width * math.sqrt(2.0 * math.pi)

    def derivative_constants(self, jmax=3, nodes=1 << 16):
        """Finite-difference ``sup |phi^(j)| (X/R)^j`` for ``j = 1..jmax``."""
        a, b = self.support
        u = np.linspace(a, b, nodes)
        h = u[1] - u[0]
        values = self(u)
        constants = {}
        for j in range(1, jmax + 1):
            values = np.gradient(values, h)
            constants[j] = float(np.max(np.abs(values))) * (self.X / self.R) ** j
        return constants


def make_test_function(kind, X, R=None, delta=None, beta=0.0):
    """
    Build a :class:`TestFunction`.

    For ``"plateau"`` pass ``delta`` (``R = 8 delta``); for ``"gaussian"``
    pass ``R`` (default 64).
    """
    if kind == "plateau":
        w = make_weight(1.0 if delta is None else delta)
        return TestFunction("plateau", float(X), 8.0 * w.delta, float(beta), w)
    if kind == "gaussian":
        R = 64.0 if R is None else float(R)
        return TestFunction("gaussian", float(X), R, float(beta), make_weight(1.0))
    raise ValueError("unknown test function kind %r" % kind)


@dataclass(frozen=True)
class GammaRatio:
    """
    ``rho(s) = 2^(-2s-1) Gamma((k+1)/2 + s) / Gamma((k-1)/2 - s)``.

    This is the four-Gamma quotient of the functional equation reduced by
    the duplication formula; :meth:`log_value_quotient` evaluates the
    unreduced form.
    """

    kappa: int

    def log_value(self, s):
        s = np.asarray(s, dtype=np.complex128)
        k = self.kappa
        return (
            (-2.0 * s - 1.0) * math.log(2.0)
            + special.loggamma((k + 1) / 2.0 + s)
            - special.loggamma((k - 1) / 2.0 - s)
        )

    def log_value_quotient(self, s):
        s = np.asarray(s, dtype=np.complex128)
        k = self.kappa
        lg = special.loggamma
        return (
            lg((1 + s + (k + 1) / 2.0) / 2.0)
            + lg((1 + s + (k - 1) / 2.0) / 2.0)
            - lg((-s + (k + 1) / 2.0) / 2.0)
            - lg((-s + (k - 1) / 2.0) / 2.0)
        )

    def value(self, s):
        return np.exp(self.log_value(s))

    def check_abscissa(self, sigma):
        k = self.kappa
        if sigma <= -1.0 - (k + 1) / 2.0:
            raise ContourOutOfRange(
                "sigma=%g is outside sigma > %g" % (sigma, -1.0 - (k + 1) / 2.0)
            )
        pole = (k + 1) / 2.0 + sigma
        if pole <= 0 and pole == math.floor(pole):
            raise ContourOutOfRange("sigma=%g passes through a pole of rho" % sigma)


def gamma_ratio(kappa):
    return GammaRatio(int(kappa))


def mellin_transform(phi, s, rtol=1e-9):
    """
    ``phi~(s) = int phi(u) u^(s-1) du`` by adaptive quadrature.

    The integral is taken in ``v = log u`` with the oscillatory weights
    ``cos(tau v)`` and ``sin(tau v)``, piece by piece between the
    breakpoints of the window.

    :raises QuadratureFailure: if the integrator reports non-convergence.
    """
    s = complex(s)
    sigma, tau = s.real, s.imag
    cuts = np.log(phi.breakpoints)
    scale = sum(
        integrate.quad(lambda v: float(phi.window(math.exp(v))) * math.exp(sigma * v), lo, hi)[0]
        for lo, hi in zip(cuts[:-1], cuts[1:])
    )
    atol = max(abs(scale), 1e-300) * rtol
    parts = [np.real] + ([np.imag] if phi.beta else [])

    def piece(part, weight, lo, hi):
        def f(v):
            return float(part(phi(math.exp(v))) * math.exp(sigma * v))

        if tau == 0:
            if weight == "sin":
                return 0.0
            return integrate.quad(f, lo, hi, epsabs=atol, epsrel=rtol, limit=400)[0]
        return integrate.quad(
            f, lo, hi, weight=weight, wvar=tau, epsabs=atol, epsrel=rtol, limit=400
        )[0]

    total = 0j
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                # u^(i tau) = cos(tau v) + i sin(tau v)
                for unit, part in zip((1.0, 1j), parts):
                    total += unit * complex(
                        piece(part, "cos", lo, hi), piece(part, "sin", lo, hi)
                    )
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(
                "Mellin transform at s=%s did not converge: %s" % (s, exc)
            ) from None
    return total


def _mellin_samples(phi, kappa, sigma, tail_tol):
    """Samples ``(tau_j, A_j)`` with ``A_j = rho(sigma + i tau_j) phi~(-sigma - i tau_j)``."""
    rho = gamma_ratio(kappa)
    rho.check_abscissa(sigma)
    v0 = math.log(phi.support[0])
    nodes = MELLIN_MIN_NODES
    while nodes <= MELLIN_MAX_NODES:
        dv = LOG_PERIOD / nodes
        v = v0 + dv * np.arange(nodes)
        g = phi(np.exp(v)) * np.exp(-sigma * v)
        k = np.fft.fftfreq(nodes, d=1.0 / nodes)
        tau = 2.0 * np.pi * k / LOG_PERIOD
        transform = dv * np.exp(-1j * tau * v0) * np.fft.fft(g)
        A = rho.value(sigma + 1j * tau) * transform
        magnitude = np.abs(A)
        outer = np.abs(tau) > 0.5 * np.abs(tau).max()
        ratio = magnitude[outer].sum() / magnitude.sum()
        logger.debug(
            "[thetatwist] Mellin grid %d nodes, outer octave ratio %.3g", nodes, ratio
        )
        if ratio < tail_tol:
            keep = magnitude > 1e-16 * magnitude.max()
            return tau[keep], A[keep]
        nodes *= 2
    raise QuadratureFailure(
        "Mellin-Barnes integrand not resolved with %d nodes" % MELLIN_MAX_NODES
    )


def phi_mellin(x, phi, kappa=12, sigma=-0.5, T=None, tail_tol=1e-6):
    """
    ``Phi(x)`` from the Mellin-Barnes integral on ``Re(s) = sigma``.

    :param x: Positive scalar or array.
    :param phi: The test function.
    :type phi: TestFunction
    :param kappa: Weight of the form.
    :param sigma: Contour abscissa, ``sigma > -1 - (kappa + 1)/2``.
    :param T: Optional truncation height ``|Im s| <= T``; by default the
        height doubles until the outer octave is below ``tail_tol``.
    :raises ContourOutOfRange: for an inadmissible ``sigma``.
    :raises QuadratureFailure: if the node budget is exhausted.
    """
    tau, A = _mellin_samples(phi, kappa, sigma, tail_tol)
    if T is not None:
        keep = np.abs(tau) <= T
        tau, A = tau[keep], A[keep]
    h = 2.0 * np.pi / LOG_PERIOD
    prefactor = (1j**kappa) / (2.0 * np.pi**2) * h
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(xs <= 0):
        raise ValueError("Phi is evaluated at positive x only")
    out = np.empty(len(xs), dtype=np.complex128)
    chunk = max(1, KERNEL_BUDGET // max(len(tau), 1))
    for start in range(0, len(xs), chunk):
        logs = np.log(np.pi**2 * xs[start : start + chunk])
        kernel = np.exp(-np.outer(logs, sigma + 1j * tau))
        out[start : start + chunk] = prefactor * (kernel @ A)
    return out if np.ndim(x) else complex(out[0])


def _trapezoid(values, h):
    return h * (values.sum() - 0.5 * (values[0] + values[-1]))


def _bessel_integral(x, phi, kappa, rtol):
    a, b = phi.support
    nodes = ORACLE_MIN_NODES
    previous = None
    while True:
        y = np.linspace(a, b, nodes + 1)
        h = (b - a) / nodes
        integrand = phi(y) * special.jv(kappa - 1, 4.0 * np.pi * np.sqrt(x * y))
        estimate = _trapezoid(integrand, h)
        scale = _trapezoid(np.abs(integrand), h)
        if previous is not None and abs(estimate - previous) <= rtol * max(scale, 1e-300):
            logger.debug(
                "[thetatwist] Bessel quadrature at x=%g converged with %d nodes", x, nodes
            )
            return estimate
        if nodes >= ORACLE_MAX_NODES:
            raise QuadratureFailure(
                "Bessel integral at x=%g not converged with %d nodes" % (x, nodes)
            )
        if nodes == ORACLE_MAX_NODES // 2:
            logger.warning(
                "[thetatwist] Bessel quadrature at x=%g near its node budget", x
            )
        previous = estimate
        nodes *= 2


def phi_bessel_oracle(x, phi, kappa=12, rtol=1e-10):
    """
    ``Phi(x) = 2 pi i^k x int phi(y) J_(k-1)(4 pi sqrt(xy)) dy``.

    The integrand is smooth with compact support, so the trapezoidal rule
    converges faster than any power; nodes double until two successive
    estimates agree to ``rtol`` relative to ``int |phi J|``.

    :raises QuadratureFailure: if the node budget is exhausted.
    """
    if kappa < 2 or kappa % 2:
        raise ValueError("weight must be an even integer >= 2, got %r" % kappa)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(xs <= 0):
        raise ValueError("Phi is evaluated at positive x only")
    out = np.array([_bessel_integral(float(v), phi, kappa, rtol) for v in xs], dtype=np.complex128)
    out *= 2.0 * np.pi * (1j**kappa) * xs
    return out if np.ndim(x) else complex(out[0])


def calibrate(phi, kappa, x0):
    """Constant ``c`` with ``phi_mellin(x0) = c * phi_bessel_oracle(x0)``."""
    oracle = phi_bessel_oracle(x0, phi, kappa)
    if oracle == 0:
        raise QuadratureFailure("oracle vanishes at the calibration point %g" % x0)
    return phi_mellin(x0, phi, kappa) / oracle


def oracle_agreement(phi, kappa, xs, x0=None):
    """
    Normwise discrepancy ``max |Phi_m - c Phi_o| / max |Phi_o|`` on ``xs``.

    ``c`` comes from :func:`calibrate` at ``x0`` (default: the median of
    ``xs``). Returns ``(discrepancy, c)``.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if x0 is None:
        x0 = float(np.median(xs))
    c = calibrate(phi, kappa, x0)
    mellin = phi_mellin(xs, phi, kappa)
    oracle = phi_bessel_oracle(xs, phi, kappa)
    return float(np.max(np.abs(mellin - c * oracle)) / np.max(np.abs(oracle))), c


def contour_shift_discrepancy(phi, kappa, xs, sigma=-0.5, sigma2=0.0):
    """Normwise difference of :func:`phi_mellin` on two contours."""
    first = phi_mellin(xs, phi, kappa, sigma=sigma)
    second = phi_mellin(xs, phi, kappa, sigma=sigma2)
    return float(np.max(np.abs(first - second)) / np.max(np.abs(first)))


def negligible_threshold(phi, delta=None):
    """``x_neg = (C (delta + |beta| X))^2 / X``; ``Phi`` is negligible beyond it."""
    d = phi.R / 8.0 if delta is None else delta
    return (NEGLIGIBLE_CONSTANT * (d + abs(phi.beta) * phi.X)) ** 2 / phi.X


def voronoi_truncation(q, phi, safety=2.0):
    """Dual-sum length ``n* = ceil(q^2 x_neg safety)``."""
    return int(math.ceil(q * q * negligible_threshold(phi) * safety))


def voronoi_sides(a, q, phi, t, kappa=12, truncation=None, transform="mellin"):
    """
    Both sides of the Voronoi formula.

    ``sum lam(n) e(an/q) phi(n)`` and
    ``q sum_{n <= n*} lam(n)/n e(-abar n/q) Phi(n/q^2)``.

    :returns: ``(lhs, rhs_terms)`` with the individual dual-sum terms.
    """
    if gcd(a, q) != 1:
        raise ValueError("a=%d is not coprime to q=%d" % (a, q))
    abar = int(mod_inverse(a, q)) if q > 1 else 0
    n_star = voronoi_truncation(q, phi) if truncation is None else int(truncation)
    lo, hi = phi.support
    n = np.arange(int(math.floor(lo)) + 1, int(math.floor(hi)) + 1)
    t.require(max(int(n[-1]), n_star))
    lhs = complex(np.sum(t.lam[n] * np.exp(2j * np.pi * np.mod(a * n, q) / q) * phi(n)))
    m = np.arange(1, n_star + 1)
    x = m / float(q * q)
    if transform == "mellin":
        Phi = phi_mellin(x, phi, kappa)
    elif transform == "bessel":
        Phi = phi_bessel_oracle(x, phi, kappa)
    else:
        raise ValueError("unknown transform %r" % transform)
    rhs_terms = q * t.lam[m] / m * np.exp(-2j * np.pi * np.mod(abar * m, q) / q) * Phi
    return lhs, rhs_terms


def voronoi_identity_residual(
    a, q, phi, t, kappa=12, truncation=None, transform="mellin", block_tol=1e-3
):
    """
    Relative discrepancy ``|LHS - RHS| / max(|LHS|, 1)`` of the Voronoi formula.

    :raises TruncationTooSmall: if the last dyadic block of the dual sum
        still contributes more than ``block_tol`` relatively.
    """
    lhs, terms = voronoi_sides(a, q, phi, t, kappa, truncation, transform)
    scale = max(abs(lhs), 1.0)
    n_star = len(terms)
    last_block = abs(terms[n_star // 2 :].sum()) / scale
    if last_block > block_tol:
        raise TruncationTooSmall(
            "terms in (%d, %d] still contribute %.3g" % (n_star // 2, n_star, last_block)
        )
    residual = abs(lhs - terms.sum()) / scale
    logger.debug(
        "[thetatwist] Voronoi a=%d q=%d n*=%d residual %.3g", a, q, n_star, residual
    )
    return float(residual)


@dataclass
class RegimeReport:
    """Measured behaviour of ``Phi_beta`` in its three ranges of ``x``.

    ``window`` is the oscillatory range in units of ``sqrt(xX)``; it and
    ``oscillatory`` are ``None`` when ``R_beta`` leaves no room for it.
    """

    beta: float
    delta: float
    X: float
    x_negligible: float
    negligible_ratio: float
    window: Optional[tuple]
    oscillatory: Optional[FitResult]
    small: FitResult

    def as_dict(self):
        return {
            "beta": self.beta,
            "delta": self.delta,
            "X": self.X,
            "x_negligible": self.x_negligible,
            "negligible_ratio": self.negligible_ratio,
            "window": None if self.window is None else list(self.window),
            "oscillatory_slope": None if self.oscillatory is None else self.oscillatory.slope,
            "small_slope": self.small.slope,
        }


def _block_envelope(xs, values, blocks):
    # max |Phi| over consecutive blocks of the sample; the block center is the abscissa
    points = []
    for chunk_x, chunk_v in zip(np.array_split(xs, blocks), np.array_split(values, blocks)):
        points.append((float(np.sqrt(chunk_x[0] * chunk_x[-1])), float(np.max(np.abs(chunk_v)))))
    return points


def oscillatory_window(r_beta):
    """
    Range ``OSCILLATORY_ONSET <= sqrt(xX) <= R_beta/2`` of the ``(xX)^(1/4)`` law.

    :returns: ``(lo, hi)``, or ``None`` when it spans less than an octave.
    """
    hi = r_beta / 2.0
    if hi < 2.0 * OSCILLATORY_ONSET:
        return None
    return OSCILLATORY_ONSET, hi


def phi_beta_regimes(beta, delta, X, kappa=12, samples=512, transform="bessel"):
    """
    Sample ``Phi_beta`` for ``phi_beta(x) = e(-x beta) w(x/X)``.

    With ``R_beta = delta + |beta| X``:

    * negligible range ``x >= x_neg``: ratio of ``max |Phi|`` there to its
      maximum over ``1 <= sqrt(xX) <= R_beta``;
    * oscillatory range, see :func:`oscillatory_window`: envelope exponent
      in ``x``, near 1/4;
    * small range ``xX <= 1``: exponent in ``x``, at least 1/2.
    """
    phi = make_test_function("plateau", X, delta=delta, beta=beta)
    r_beta = delta + abs(beta) * X
    evaluate = phi_mellin if transform == "mellin" else phi_bessel_oracle

    ref_x = np.geomspace(1.0 / X, max(r_beta, 2.0) ** 2 / X, max(samples // 4, 8))
    reference = float(np.max(np.abs(evaluate(ref_x, phi, kappa))))

    window = oscillatory_window(r_beta)
    oscillatory = None
    if window is None:
        logger.warning(
            "[thetatwist] R_beta=%g leaves no oscillatory range above sqrt(xX)=%g",
            r_beta,
            OSCILLATORY_ONSET,
        )
    else:
        lo, hi = window
        osc_x = np.geomspace(lo**2 / X, hi**2 / X, samples)
        osc_values = evaluate(osc_x, phi, kappa)
        oscillatory = fit_exponent(_block_envelope(osc_x, osc_values, 8))
        reference = max(reference, float(np.max(np.abs(osc_values))))

    small_x = np.geomspace(1e-3 / X, 1.0 / X, 8)
    small = fit_exponent(list(zip(small_x, np.abs(evaluate(small_x, phi, kappa)))))

    x_neg = negligible_threshold(phi, delta)
    neg_x = np.geomspace(x_neg, 4.0 * x_neg, 8)
    neg_values = evaluate(neg_x, phi, kappa)
    ratio = float(np.max(np.abs(neg_values)) / reference)
    logger.info(
        "[thetatwist] Phi_beta regimes beta=%g delta=%g: slopes %s / %.3f, negligible %.3g",
        beta,
        delta,
        "-" if oscillatory is None else "%.3f" % oscillatory.slope,
        small.slope,
        ratio,
    )
    return RegimeReport(
        beta=beta,
        delta=delta,
        X=X,
        x_negligible=x_neg,
        negligible_ratio=ratio,
        window=window,
        oscillatory=oscillatory,
        small=small,
    )


def gcd_weighted_mass_slope(t, q, grid):
    """
    Fitted exponent of ``sum_{n <= x} |lam(n)| gcd(n, q)^(1/2)``.

    :raises DegenerateGrid: on fewer than three grid points.
    """
    grid = [int(x) for x in grid]
    if len(grid) < 3:
        raise DegenerateGrid("need 3 grid points, got %d" % len(grid))
    t.require(max(grid))
    n = np.arange(t.N + 1)
    mass = np.cumsum(np.abs(t.lam) * np.sqrt(np.gcd(n, q)))
    return fit_exponent([(x, mass[x]) for x in grid]).slope
