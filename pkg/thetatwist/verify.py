# -*- coding: utf-8 -*-
"""
    thetatwist.verify
    ~~~~~~~~~~~~~~~~~

    The verification suite: exact identities, oracle equivalences and
    exponent envelopes for every module, at a ``quick`` or ``full`` level.

    A failing check never raises. Each check becomes a :class:`Check` record;
    a :class:`~thetatwist.errors.ThetaTwistError` raised inside a check is
    recorded as a failure with its category.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import datetime
import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import __version__, jsonimpl
from .characters import build_char, char_fourier_check, kloosterman_table
from .circle import (
    arc_integrals,
    build_arcs,
    choose_Q,
    direct_sum,
    integral_total,
    theorem11_exponent,
    theorem12_exponent,
)
from .errors import ThetaTwistError
from .experiments import (
    ExperimentConfig,
    charsum_report,
    dyadic_grid,
    hua_report,
    thm11_experiment,
    thm12_experiment,
)
from .expsums import hua_count, make_weight
from .forms import build_table, deligne_max_ratio, rankin_selberg_slope
from .ntheory import divisor_count_table, prime_sieve
from .theta import r2_oracle, r_bound_slope, r_ell, r_ell_box
from .voronoi import (
    make_test_function,
    oracle_agreement,
    phi_beta_regimes,
    voronoi_identity_residual,
    voronoi_truncation,
)

logger = logging.getLogger("thetatwist")

__all__ = ["Check", "VerifySummary", "LEVELS", "verify_all"]

LEVELS = ("quick", "full")


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None
    threshold: object = None
    detail: str = ""
    category: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
            "detail": self.detail,
            "category": self.category,
        }


@dataclass
class VerifySummary:
    level: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]

    def as_dict(self, timestamp=True):
        payload = {
            "level": self.level,
            "passed": self.passed,
            "failed": len(self.failures),
            "checks": [check.as_dict() for check in self.checks],
        }
        if timestamp:
            payload["metadata"] = {
                "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                "version": __version__,
            }
        return payload

    def dumps(self, timestamp=True):
        return jsonimpl.dumps(self.as_dict(timestamp=timestamp))


def _at_most(name, value, threshold, detail=""):
    return Check(name, bool(value <= threshold), float(value), threshold, detail)


def _within(name, value, lo, hi, detail=""):
    return Check(name, bool(lo <= value <= hi), float(value), [lo, hi], detail)


def _exact(name, value, expected, detail=""):
    return Check(name, value == expected, value, expected, detail)


def _close(name, value, expected, detail=""):
    return Check(name, bool(abs(value - expected) <= 1e-12), float(value), expected, detail)


# -- suites ----------------------------------------------------------------------------
#
# Each suite receives the level and yields checks. Parameters follow the
# acceptance grid at ``full`` and a reduced grid at ``quick``.


def _orthogonality(level):
    sizes = (512,) if level == "quick" else (512, 2048)
    t = build_table(max(sizes))
    w = make_weight(1.0)
    for X in sizes:
        for ell in (3, 4):
            for p, j in ((5, 2), (13, 1)):
                chi = build_char(p, j)
                direct = direct_sum(X, ell, t, chi, w)
                total = integral_total(X, ell, t, chi, w)
                label = "X=%d ell=%d p=%d j=%d" % (X, ell, p, j)
                yield _at_most(
                    "circle.orthogonality",
                    abs(total - direct) / (1.0 + abs(direct)),
                    1e-9,
                    label,
                )
    X, ell, p = 1024, 3, 5
    chi = build_char(p, 2)
    P, Q = choose_Q(p, X, 1.0, ell)
    parts = arc_integrals(ell, X, build_table(X), chi, w, build_arcs(P, Q, X))
    yield _at_most("circle.additivity", parts.additivity_error, 1e-9, "X=%d P=%.3f Q=%.3f" % (X, P, Q))


def _characters(level):
    report = (
        charsum_report(primes=(5, 7), qmax=10, nmax=20)
        if level == "quick"
        else charsum_report()
    )
    yield _at_most("characters.charsum_closed_form", report.summary["max_error"], 1e-10)

    pmax = 31 if level == "quick" else 101
    worst = 0.0
    for p in np.flatnonzero(prime_sieve(pmax))[1:]:
        for j in range(1, int(p) - 1):
            worst = max(worst, abs(abs(build_char(int(p), j).gauss) - math.sqrt(p)))
    yield _at_most("characters.gauss_modulus", worst, 1e-10, "p <= %d" % pmax)

    worst = 0.0
    for p in (3, 5, 7, 11, 13):
        for j in range(1, p - 1):
            chi = build_char(p, j)
            worst = max(worst, max(char_fourier_check(chi, n) for n in range(p)))
    yield _at_most("characters.fourier_expansion", worst, 1e-10, "p <= 13")

    qmax = 30 if level == "quick" else 100
    d = divisor_count_table(qmax)
    worst = 0.0
    for q in range(1, qmax + 1):
        S = kloosterman_table(q)
        r = np.arange(q)
        g = np.gcd(np.gcd(r[:, None], r[None, :]), q)
        worst = max(worst, float(np.max(np.abs(S) / (d[q] * math.sqrt(q) * np.sqrt(g)))))
    yield _at_most("characters.weil_bound", worst, 1.0, "q <= %d" % qmax)


def _forms(level):
    N = 2**14 if level == "quick" else 2**17
    t = build_table(N)
    yield _at_most("forms.deligne", deligne_max_ratio(t), 1.0, "N=%d" % N)

    a = t.a
    bad = 0
    hecke_max = N if level == "full" else 2**12
    for m in range(2, math.isqrt(hecke_max) + 1):
        n = np.arange(m + 1, hecke_max // m + 1)
        n = n[np.gcd(n, m) == 1]
        if len(n) == 0:
            continue
        bad += int(np.count_nonzero(a[m * n] != a[m] * a[n]))
    yield _exact("forms.hecke_multiplicative", bad, 0, "coprime mn <= %d" % hecke_max)

    grid = dyadic_grid(2**10, N)
    yield _within("forms.rankin_selberg_slope", rankin_selberg_slope(t, grid), 0.9, 1.1)


def _theta(level):
    N = 2000 if level == "quick" else 10**5
    counts = r_ell(2, N).counts
    mismatches = sum(1 for n in range(1, N + 1) if counts[n] != r2_oracle(n))
    yield _exact("theta.r2_oracle", mismatches, 0, "n <= %d" % N)

    for ell in (2, 3, 4):
        box = r_ell_box(ell, 400)
        yield _exact("theta.box_mass", box.total(), (2 * box.box + 1) ** ell, "ell=%d" % ell)

    N = 2**12 if level == "quick" else 2**16
    for ell in (3, 4, 8):
        yield _at_most(
            "theta.r_bound_slope", r_bound_slope(ell, N), ell / 2.0 - 1 + 0.15, "ell=%d" % ell
        )


def _expsums(level):
    yield _exact("expsums.hua_small", hua_count(1), 33)
    top = 2**12 if level == "quick" else 2**16
    report = hua_report(dyadic_grid(2**8, top), quadrature_max=2**8)
    yield Check("expsums.hua_quadrature", report.summary["quadrature_exact"], detail="X <= 256")
    yield _within("expsums.hua_slope", report.summary["slope"], 1.0, 1.15, "X <= %d" % top)


def _voronoi(level):
    X = 2000
    moduli = (1, 2) if level == "quick" else (1, 2, 3, 5)
    phi = make_test_function("plateau", X, delta=1.0)
    t = build_table(max(X, voronoi_truncation(max(moduli), phi)))
    for q in moduli:
        for a in range(1, q + 1):
            if math.gcd(a, q) != 1:
                continue
            residual = voronoi_identity_residual(a, q, phi, t)
            yield _at_most("voronoi.identity", residual, 1e-3, "q=%d a=%d" % (q, a))

    n_star = voronoi_truncation(1, phi)
    coarse = voronoi_identity_residual(1, 1, phi, t, truncation=n_star // 4, block_tol=math.inf)
    fine = voronoi_identity_residual(1, 1, phi, t, truncation=n_star // 2, block_tol=math.inf)
    yield _at_most("voronoi.truncation_doubling", fine, max(coarse / 2.0, 1e-5))

    gaussian = make_test_function("gaussian", 1000.0, R=16.0)
    discrepancy, _ = oracle_agreement(gaussian, 12, np.geomspace(0.01, 1.0, 9))
    yield _at_most("voronoi.oracle_agreement", discrepancy, 1e-3)

    if level == "full":
        regimes = phi_beta_regimes(0.0, 128.0, 2000.0)
        yield _within("voronoi.oscillatory_slope", regimes.oscillatory.slope, 0.15, 0.35)
        yield Check(
            "voronoi.small_slope",
            bool(regimes.small.slope >= 0.4),
            regimes.small.slope,
            ">= 0.4",
        )
        yield _at_most("voronoi.negligible", regimes.negligible_ratio, 1e-4)


def _theorems(level):
    yield _close("harness.exponent_thm11_ell3", theorem11_exponent(3), 4.0 / 3)
    yield _close("harness.exponent_thm11_ell4", theorem11_exponent(4), 12.0 / 7)
    yield _close("harness.exponent_thm12_ell3", theorem12_exponent(3), 19.0 / 14)
    if level != "full":
        return
    report = thm11_experiment(ExperimentConfig(ell=4, p=13, j=1, grid=tuple(dyadic_grid(2**10, 2**16))))
    yield _at_most("harness.thm11_slope", report.summary["slope"], 2.0 - 0.2, "ell=4 p=13")
    report = thm12_experiment(ExperimentConfig(ell=3, p=5, j=2, grid=tuple(dyadic_grid(2**10, 2**14))))
    yield _at_most("harness.thm12_slope", report.summary["slope"], 1.4, "ell=3 p=5")


SUITES = (
    ("circle", _orthogonality),
    ("characters", _characters),
    ("forms", _forms),
    ("theta", _theta),
    ("expsums", _expsums),
    ("voronoi", _voronoi),
    ("harness", _theorems),
)


def verify_all(level="quick"):
    """
    Run every suite at ``level``.

    :param level: ``"quick"`` or ``"full"``.
    :rtype: VerifySummary
    """
    if level not in LEVELS:
        raise ValueError("level must be one of %s, got %r" % (LEVELS, level))
    summary = VerifySummary(level)
    for name, suite in SUITES:
        logger.info("[thetatwist] verifying %s (%s)", name, level)
        try:
            for check in suite(level):
                if not check.passed:
                    logger.warning(
                        "[thetatwist] check %s failed: %r (threshold %r) %s",
                        check.name,
                        check.value,
                        check.threshold,
                        check.detail,
                    )
                summary.checks.append(check)
        except ThetaTwistError as exc:
            logger.warning("[thetatwist] suite %s raised %s: %s", name, exc.category, exc)
            summary.checks.append(
                Check(name, False, detail=str(exc), category=exc.category)
            )
    return summary
