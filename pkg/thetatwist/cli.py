# -*- coding: utf-8 -*-
"""
    thetatwist.cli
    ~~~~~~~~~~~~~~

    Command-line entry point.

    Exit codes: 0 when every check passes, 1 when a check fails or a
    computation raises, 2 on a configuration error.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import argparse
import contextlib
import logging
import sys
from typing import List, Optional

from . import __version__
from .config import Config, ensure_configuration, read_config_file
from .errors import ConfigError, ThetaTwistError
from .experiments import (
    ExperimentConfig,
    arcs_report,
    charsum_report,
    dyadic_grid,
    hua_report,
    tau_table,
    thm11_experiment,
    thm12_experiment,
    voronoi_report,
    write_report,
)
from .verify import verify_all

logger = logging.getLogger("thetatwist")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

COMMANDS = ("verify", "thm11", "thm12", "voronoi-check", "charsum-check", "arcs", "hua", "tau-table")

# flag name -> configuration value
_OVERRIDES = {
    "ell": "ell",
    "p": "p",
    "char_index": "char_index",
    "xmin": "xmin",
    "xmax": "xmax",
    "delta": "delta",
    "delta_policy": "delta_policy",
    "P": "P",
    "Q": "Q",
    "level": "level",
    "threads": "threads",
    "out": "out",
    "format": "format",
    "cache_dir": "cache_dir",
}

# command -> (summary key, largest passing value)
_CHECK_LIMITS = {
    "voronoi-check": ("max_residual", 1e-3),
    "charsum-check": ("max_error", 1e-10),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="thetatwist",
        description="Desk-scale verification of twisted Hecke-theta sums.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--ell", type=int, help="number of squares")
    parser.add_argument("--p", type=int, help="prime modulus of the character")
    parser.add_argument("--char-index", dest="char_index", type=int, help="character index j")
    parser.add_argument("--xmin", type=int, help="smallest X of the dyadic grid")
    parser.add_argument("--xmax", type=int, help="largest X of the dyadic grid")
    parser.add_argument("--delta", type=float, help="smooth weight parameter")
    parser.add_argument(
        "--delta-policy", dest="delta_policy", choices=("fixed", "optimal"), help="how delta is chosen"
    )
    parser.add_argument("--P", dest="P", type=float, help="explicit major arc bound")
    parser.add_argument("--Q", dest="Q", type=float, help="explicit approximation quality")
    parser.add_argument("--level", choices=("quick", "full"), help="verification level")
    parser.add_argument("--threads", type=int, help="worker threads for grid points")
    parser.add_argument("--out", help="output path (default: standard output)")
    parser.add_argument("--format", choices=("csv", "json"), help="report format")
    parser.add_argument("--cache-dir", dest="cache_dir", help="directory of cached tau tables")
    parser.add_argument("--N", dest="N", type=int, default=100, help="length of the tau table")
    parser.add_argument("--X", dest="X", type=float, default=2000.0, help="Voronoi test size")
    parser.add_argument(
        "--no-timestamp", dest="timestamp", action="store_false", help="omit report metadata"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def load_config(args):
    """Merge defaults, the configuration file and command-line flags."""
    config = Config(read_config_file(args.config))
    overrides = {name: getattr(args, flag) for flag, name in _OVERRIDES.items()}
    if overrides["P"] is not None or overrides["Q"] is not None:
        overrides["pq_policy"] = "explicit"
    config.update(overrides)
    return ensure_configuration(config)


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fp:
            yield fp


def _setup_logging(verbose):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    return handler


def run(args, config):
    if args.command == "verify":
        summary = verify_all(config.level)
        with _output(config.out) as fp:
            fp.write(summary.dumps(timestamp=args.timestamp))
            fp.write("\n")
        return EXIT_OK if summary.passed else EXIT_FAILED

    if args.command in ("thm11", "thm12", "arcs"):
        cfg = ExperimentConfig.from_config(config)
        runner = {"thm11": thm11_experiment, "thm12": thm12_experiment, "arcs": arcs_report}
        report = runner[args.command](cfg)
    elif args.command == "hua":
        report = hua_report(dyadic_grid(config.xmin, config.xmax), threads=config.threads)
    elif args.command == "voronoi-check":
        moduli = (1, 2) if config.level == "quick" else (1, 2, 3, 5)
        report = voronoi_report(X=args.X, moduli=moduli, kappa=config.weight)
    elif args.command == "charsum-check":
        report = (
            charsum_report(primes=(5, 7), qmax=10, nmax=20)
            if config.level == "quick"
            else charsum_report()
        )
    else:
        report = tau_table(args.N, cache_dir=config.cache_dir, max_table=config.max_table)

    with _output(config.out) as fp:
        write_report(report, fp, config.format, timestamp=args.timestamp)
    limit = _CHECK_LIMITS.get(args.command)
    if limit is not None:
        key, threshold = limit
        if not report.summary[key] <= threshold:
            logger.error(
                "[thetatwist] %s: %s=%.3g exceeds %g",
                args.command,
                key,
                report.summary[key],
                threshold,
            )
            return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = _setup_logging(args.verbose)
    try:
        config = load_config(args)
        logger.debug("[thetatwist] %r", config)
        return run(args, config)
    except ConfigError as exc:
        logger.error("[thetatwist] %s: %s", exc.category, exc)
        return EXIT_CONFIG
    except ThetaTwistError as exc:
        logger.error("[thetatwist] %s: %s", exc.category, exc)
        return EXIT_FAILED
    finally:
        logger.removeHandler(handler)
