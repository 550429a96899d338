# -*- coding: utf-8 -*-
"""Desk-scale verification of cancellation in sums of Hecke eigenvalues twisted by theta coefficients and Dirichlet characters.

    thetatwist
    ~~~~~~~~~~

    Modular-form coefficients, theta representation counts, character and
    Kloosterman sums, the GL(2) Voronoi transform and the circle-method arc
    decomposition, plus an exponent-fitting harness.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""

__version__ = "0.1.0"
