# -*- coding: utf-8 -*-
"""
    thetatwist.experiments
    ~~~~~~~~~~~~~~~~~~~~~~

    Desk-scale experiments over dyadic grids of ``X`` and the reports behind
    the command-line subcommands.

    Every report is a :class:`Report`: an ordered list of rows with a fixed
    column order, an optional exponent fit and a summary mapping. Grid points
    may run on a thread pool; ``Executor.map`` returns results in submission
    order, so the rows never depend on scheduling.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import csv
import datetime
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import __version__, jsonimpl
from .characters import build_char, charsum_table, gauss_sum
from .circle import (
    arc_integrals,
    build_arcs,
    choose_Delta,
    choose_Q,
    direct_sum,
    heuristic_exponent,
    major_bound,
    minor_bound,
    theorem11_bound,
    theorem11_exponent,
    theorem12_exponent,
    trivial_exponent,
)
from .errors import ConfigError, HypothesisViolated
from .expsums import hua_count, hua_quadrature, make_weight
from .fitting import FitResult, fit_exponent
from .forms import load_or_build_table
from .ntheory import gcd
from .theta import r_ell
from .voronoi import make_test_function, voronoi_identity_residual, voronoi_truncation

logger = logging.getLogger("thetatwist")

__all__ = [
    "ExperimentConfig",
    "Report",
    "PROVENANCE_COLUMNS",
    "THM11_COLUMNS",
    "dyadic_grid",
    "thm11_experiment",
    "thm12_experiment",
    "arcs_report",
    "hua_report",
    "voronoi_report",
    "charsum_report",
    "tau_table",
    "write_report",
]

#: Leading columns of every report that walks an experiment grid.
PROVENANCE_COLUMNS = ("ell", "p", "j", "X", "delta", "P", "Q")

THM11_COLUMNS = PROVENANCE_COLUMNS + (
    "S_real", "S_imag", "S_abs", "trivial_exp", "thm_exp",
)  # fmt: skip

THM12_COLUMNS = PROVENANCE_COLUMNS + (
    "blocks",
    "S_real", "S_imag", "S_abs", "smooth_abs", "error_abs", "o_term",
    "trivial_exp", "thm_exp",
)  # fmt: skip

ARCS_COLUMNS = PROVENANCE_COLUMNS + (
    "major_abs", "minor_abs", "total_abs", "direct_abs",
    "orthogonality_error", "additivity_error",
    "major_bound", "minor_bound", "major_measure", "expected_major_measure", "overlaps",
)  # fmt: skip


def dyadic_grid(xmin, xmax):
    """
    ``[xmin, 2 xmin, 4 xmin, ...]`` up to ``xmax``.

    :raises ConfigError: unless ``1 <= xmin <= xmax``.
    """
    if not 1 <= xmin <= xmax:
        raise ConfigError("need 1 <= xmin <= xmax, got %r, %r" % (xmin, xmax))
    grid = []
    x = int(xmin)
    while x <= xmax:
        grid.append(x)
        x *= 2
    return grid


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One experiment over a dyadic grid.

    ``p`` must lie below every ``X`` and the grid must increase strictly.
    """

    ell: int
    p: int
    j: int
    grid: Tuple[int, ...]
    kappa: int = 12
    delta: float = 1.0
    delta_policy: str = "fixed"
    pq_policy: str = "optimal"
    P: Optional[float] = None
    Q: Optional[float] = None
    threads: int = 1
    cache_dir: Optional[str] = None
    max_table: int = 400_000

    def __post_init__(self):
        if self.ell < 3:
            raise ConfigError("experiments need ell >= 3, got %r" % self.ell)
        if len(self.grid) == 0 or any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ConfigError("grid must be nonempty and strictly increasing: %r" % (self.grid,))
        if self.p >= self.grid[0]:
            raise ConfigError("p=%d must be below min X=%d" % (self.p, self.grid[0]))
        if self.delta_policy not in ("fixed", "optimal"):
            raise ConfigError("unknown delta policy %r" % self.delta_policy)
        if self.pq_policy not in ("optimal", "explicit"):
            raise ConfigError("unknown P, Q policy %r" % self.pq_policy)
        if self.pq_policy == "explicit" and (self.P is None or self.Q is None):
            raise ConfigError("explicit P, Q policy needs both values")

    @classmethod
    def from_config(cls, config):
        """Build from a merged :class:`~thetatwist.config.Config`."""
        return cls(
            ell=config.ell,
            p=config.p,
            j=config.char_index,
            grid=tuple(dyadic_grid(config.xmin, config.xmax)),
            kappa=config.weight,
            delta=float(config.delta),
            delta_policy=config.delta_policy,
            pq_policy=config.pq_policy,
            P=config.P,
            Q=config.Q,
            threads=config.threads,
            cache_dir=config.cache_dir,
            max_table=config.max_table,
        )

    def delta_for(self, X):
        if self.delta_policy == "optimal":
            return choose_Delta(self.p, X, self.ell)
        return self.delta

    def arcs_for(self, X, delta):
        if self.pq_policy == "explicit":
            return float(self.P), float(self.Q)
        return choose_Q(self.p, X, delta, self.ell)

    def table(self):
        return load_or_build_table(
            max(self.grid), cache_dir=self.cache_dir, weight=self.kappa, max_n=self.max_table
        )

    def provenance(self, X, delta):
        return {"ell": self.ell, "p": self.p, "j": self.j, "X": X, "delta": delta}


@dataclass
class Report:
    name: str
    columns: Tuple[str, ...]
    rows: List[dict] = field(default_factory=list)
    fit: Optional[FitResult] = None
    summary: dict = field(default_factory=dict)

    def column(self, name):
        return [row[name] for row in self.rows]

    def as_dict(self):
        return {
            "name": self.name,
            "columns": list(self.columns),
            "rows": self.rows,
            "fit": None if self.fit is None else self.fit.as_dict(),
            "summary": self.summary,
        }


def _map(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _split(value):
    return float(value.real), float(value.imag), float(abs(value))


def thm11_experiment(cfg):
    """
    ``|S(X)|`` over the grid against the exponent of the power-saving bound.

    Columns are :data:`THM11_COLUMNS`; the summary carries the fitted slope
    and the trivial, theorem and heuristic exponents.
    """
    t = cfg.table()
    chi = build_char(cfg.p, cfg.j)

    def run(X):
        delta = cfg.delta_for(X)
        P, Q = cfg.arcs_for(X, delta)
        value = direct_sum(X, cfg.ell, t, chi, make_weight(delta))
        logger.info("[thetatwist] thm11 X=%d |S|=%.6g", X, abs(value))
        real, imag, size = _split(value)
        row = cfg.provenance(X, delta)
        row.update(
            P=P,
            Q=Q,
            S_real=real,
            S_imag=imag,
            S_abs=size,
            trivial_exp=trivial_exponent(cfg.ell),
            thm_exp=theorem11_exponent(cfg.ell),
        )
        return row

    rows = _map(run, cfg.grid, cfg.threads)
    fit = _fit(rows, "S_abs")
    summary = {
        "slope": None if fit is None else fit.slope,
        "trivial_exp": trivial_exponent(cfg.ell),
        "thm_exp": theorem11_exponent(cfg.ell),
        "heuristic_exp": heuristic_exponent(cfg.ell),
        "bound_ratio_max": max(
            row["S_abs"] / theorem11_bound(row["X"], cfg.ell, cfg.p, row["delta"]) for row in rows
        ),
    }
    return Report("thm11", THM11_COLUMNS, rows, fit, summary)


def _fit(rows, column):
    points = [(row["X"], row[column]) for row in rows if row[column] > 0]
    if len(points) < 3:
        return None
    return fit_exponent(points)


def _dyadic_blocks(X):
    """Integer blocks ``(Y/2, Y]`` for ``Y = X, X/2, ...`` covering ``[1, X]``."""
    blocks = []
    hi = int(X)
    while hi >= 1:
        lo = hi // 2
        blocks.append((lo, hi))
        hi = lo
    return blocks


def thm12_experiment(cfg):
    """
    Sharp sums ``sum_{n <= X} lam(n) r_ell(n) chi(n)`` from dyadic blocks.

    Each block ``(Y/2, Y]`` with ``p < Y`` is also summed with the smooth
    weight at ``delta = choose_Delta(p, Y, ell)``; the gap between the sharp
    and smoothed totals is reported next to ``X^(l/2) delta^(-1/2)``.
    """
    t = cfg.table()
    chi = build_char(cfg.p, cfg.j)

    def run(X):
        r = r_ell(cfg.ell, X).counts
        n = np.arange(X + 1)
        terms = t.lam[: X + 1] * chi(n) * r
        sharp = complex(np.sum(terms[1:]))
        blocks = _dyadic_blocks(X)
        block_total = 0j
        smooth_total = 0j
        for lo, hi in blocks:
            block = complex(np.sum(terms[lo + 1 : hi + 1]))
            block_total += block
            try:
                delta = choose_Delta(cfg.p, hi, cfg.ell)
            except HypothesisViolated:
                smooth_total += block
                continue
            smooth_total += direct_sum(hi, cfg.ell, t, chi, make_weight(delta), box=False)
        if abs(block_total - sharp) > 1e-9 * (1.0 + abs(sharp)):
            logger.warning("[thetatwist] dyadic blocks do not partition [1, %d]", X)
        delta = choose_Delta(cfg.p, X, cfg.ell)
        P, Q = cfg.arcs_for(X, delta)
        real, imag, size = _split(sharp)
        row = cfg.provenance(X, delta)
        row.update(
            P=P,
            Q=Q,
            blocks=len(blocks),
            S_real=real,
            S_imag=imag,
            S_abs=size,
            smooth_abs=abs(smooth_total),
            error_abs=abs(sharp - smooth_total),
            o_term=X ** (cfg.ell / 2.0) / math.sqrt(delta),
            trivial_exp=trivial_exponent(cfg.ell),
            thm_exp=theorem12_exponent(cfg.ell),
        )
        logger.info("[thetatwist] thm12 X=%d |S|=%.6g", X, size)
        return row

    rows = _map(run, cfg.grid, cfg.threads)
    fit = _fit(rows, "S_abs")
    summary = {
        "slope": None if fit is None else fit.slope,
        "trivial_exp": trivial_exponent(cfg.ell),
        "thm_exp": theorem12_exponent(cfg.ell),
        "heuristic_exp": heuristic_exponent(cfg.ell),
    }
    return Report("thm12", THM12_COLUMNS, rows, fit, summary)


def arcs_report(cfg):
    """Major and minor arc integrals per grid point, with their bound shapes."""
    t = cfg.table()
    chi = build_char(cfg.p, cfg.j)

    def run(X):
        delta = cfg.delta_for(X)
        P, Q = cfg.arcs_for(X, delta)
        w = make_weight(delta)
        arcs = build_arcs(P, Q, X)
        parts = arc_integrals(cfg.ell, X, t, chi, w, arcs)
        direct = direct_sum(X, cfg.ell, t, chi, w)
        row = cfg.provenance(X, delta)
        row.update(
            P=P,
            Q=Q,
            major_abs=abs(parts.major),
            minor_abs=abs(parts.minor),
            total_abs=abs(parts.total),
            direct_abs=abs(direct),
            orthogonality_error=abs(parts.total - direct) / (1.0 + abs(direct)),
            additivity_error=parts.additivity_error,
            major_bound=major_bound(X, cfg.ell, cfg.p, P, Q, delta),
            minor_bound=minor_bound(X, cfg.ell, P, Q),
            major_measure=arcs.major_measure,
            expected_major_measure=arcs.expected_major_measure(),
            overlaps=len(arcs.overlaps),
        )
        return row

    rows = _map(run, cfg.grid, cfg.threads)
    summary = {
        "max_orthogonality_error": max(row["orthogonality_error"] for row in rows),
        "max_additivity_error": max(row["additivity_error"] for row in rows),
    }
    return Report("arcs", ARCS_COLUMNS, rows, None, summary)


def hua_report(grid, quadrature_max=2**12, threads=1):
    """Fourth moment of ``F`` over ``grid``, exact and by quadrature."""

    def run(X):
        count = hua_count(X)
        row = {"X": X, "hua_count": count, "quadrature": None, "ratio": None}
        if X > 1:
            row["ratio"] = count / (X * math.log(X))
        if X <= quadrature_max:
            row["quadrature"] = hua_quadrature(X)
        return row

    rows = _map(run, grid, threads)
    fit = _fit(rows, "hua_count")
    summary = {
        "slope": None if fit is None else fit.slope,
        "quadrature_exact": all(
            row["quadrature"] == row["hua_count"] for row in rows if row["quadrature"] is not None
        ),
    }
    return Report("hua", ("X", "hua_count", "quadrature", "ratio"), rows, fit, summary)


def voronoi_report(X=2000, moduli=(1, 2, 3, 5), kappa=12, delta=1.0, t=None, transform="mellin"):
    """Voronoi residuals for every ``a`` coprime to each ``q`` in ``moduli``."""
    phi = make_test_function("plateau", X, delta=delta)
    if t is None:
        t = load_or_build_table(max(int(X), voronoi_truncation(max(moduli), phi)))
    rows = []
    for q in moduli:
        n_star = voronoi_truncation(q, phi)
        for a in range(1, q + 1):
            if gcd(a, q) != 1:
                continue
            residual = voronoi_identity_residual(a, q, phi, t, kappa, transform=transform)
            rows.append({"X": X, "q": q, "a": a, "n_star": n_star, "residual": residual})
    summary = {"max_residual": max(row["residual"] for row in rows)}
    return Report("voronoi", ("X", "q", "a", "n_star", "residual"), rows, None, summary)


def charsum_report(primes=(5, 7, 11, 13), qmax=20, nmax=50):
    """
    Largest gap between the double-sum and closed-form character sums.

    One row per ``(p, j, q)`` over ``1 <= n, M <= nmax``.
    """
    ns = np.arange(1, nmax + 1)
    rows = []
    for p in primes:
        for j in range(1, p - 1):
            chi = build_char(p, j)
            tau = abs(gauss_sum(chi))
            for q in range(1, qmax + 1):
                if gcd(q, p) != 1:
                    continue
                brute = charsum_table(q, chi, ns, ns, method="brute")
                closed = charsum_table(q, chi, ns, ns, method="closed")
                rows.append(
                    {
                        "p": p,
                        "j": j,
                        "q": q,
                        "max_error": float(np.max(np.abs(brute - closed))),
                        "gauss_error": abs(tau - math.sqrt(p)),
                    }
                )
    summary = {"max_error": max(row["max_error"] for row in rows)}
    return Report("charsum", ("p", "j", "q", "max_error", "gauss_error"), rows, None, summary)


def tau_table(N, cache_dir=None, max_table=400_000):
    """Rows ``n, tau(n), lam(n)`` for ``1 <= n <= N``."""
    t = load_or_build_table(N, cache_dir=cache_dir, max_n=max_table)
    rows = [{"n": n, "tau": int(t.a[n]), "lam": float(t.lam[n])} for n in range(1, N + 1)]
    return Report("tau", ("n", "tau", "lam"), rows)


def _metadata():
    return {
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": __version__,
    }


def write_report(report, fp, format="csv", timestamp=True):
    """
    Write a report to the open text file ``fp``.

    CSV holds the rows in column order. Grid experiments lead with
    :data:`PROVENANCE_COLUMNS`; the fixed-input reports (``hua``, ``voronoi``,
    ``charsum``, ``tau``) carry their own parameters as columns instead.

    JSON holds the whole report; the run metadata sits under the
    ``metadata`` key and is left out when ``timestamp`` is false.
    """
    if format == "csv":
        writer = csv.DictWriter(fp, fieldnames=list(report.columns), lineterminator="\n")
        writer.writeheader()
        for row in report.rows:
            writer.writerow({name: _csv_value(row[name]) for name in report.columns})
    elif format == "json":
        payload = report.as_dict()
        if timestamp:
            payload["metadata"] = _metadata()
        jsonimpl.dump(payload, fp)
        fp.write("\n")
    else:
        raise ConfigError("unknown report format %r" % format)


def _csv_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value
