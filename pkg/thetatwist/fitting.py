# -*- coding: utf-8 -*-
"""
    thetatwist.fitting
    ~~~~~~~~~~~~~~~~~~

    Least-squares exponent fits on log-log data, the empirical stand-in for
    statements of the form ``|value| << X^theta``.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGrid, NonpositiveMagnitude

__all__ = ["FitResult", "fit_exponent"]


@dataclass(frozen=True)
class FitResult:
    """Result of a log-log least-squares fit.

    :ivar slope: fitted exponent.
    :ivar intercept: fitted log-constant.
    :ivar residual: root-mean-square residual of the fit in log space.
    :ivar points: the ``(log X, log |value|)`` pairs used.
    """

    slope: float
    intercept: float
    residual: float
    points: list = field(default_factory=list)

    @property
    def constant(self):
        return math.exp(self.intercept)

    def as_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "points": [list(pt) for pt in self.points],
        }


def fit_exponent(points):
    """
    Fit ``log |value| = slope * log X + intercept``.

    :param points: Pairs ``(X, magnitude)``, at least three of them.
    :type points: iterable
    :returns: The fit.
    :rtype: FitResult
    :raises DegenerateGrid: on fewer than three points or a single X value.
    :raises NonpositiveMagnitude: if some ``X`` or magnitude is not positive.
    """
    pts = [(float(x), float(v)) for x, v in points]
    if len(pts) < 3:
        raise DegenerateGrid("exponent fit needs at least 3 points, got %d" % len(pts))
    for x, v in pts:
        if not (x > 0 and v > 0) or not math.isfinite(v):
            raise NonpositiveMagnitude(
                "cannot fit log-log through (%r, %r)" % (x, v)
            )
    logx = np.log([x for x, _ in pts])
    logv = np.log([v for _, v in pts])
    if np.ptp(logx) == 0:
        raise DegenerateGrid("exponent fit needs at least two distinct X values")
    design = np.vstack([logx, np.ones_like(logx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logv, rcond=None)
    fitted = slope * logx + intercept
    residual = float(np.sqrt(np.mean((logv - fitted) ** 2)))
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        points=[(float(a), float(b)) for a, b in zip(logx, logv)],
    )
