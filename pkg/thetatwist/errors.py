# -*- coding: utf-8 -*-
"""
    thetatwist.errors
    ~~~~~~~~~~~~~~~~~

    Exception classes raised by thetatwist.

    :copyright: Copyright 2026 by the thetatwist authors.
    :license: BSD, see LICENSE for details.
"""

__all__ = [
    "ThetaTwistError",
    "NotInvertible",
    "NotPrime",
    "ResourceLimit",
    "BadLeadingCoefficient",
    "OutOfRange",
    "DegenerateGrid",
    "TrivialCharacter",
    "ModuliNotCoprime",
    "BadDelta",
    "TableTooShort",
    "QuadratureFailure",
    "ContourOutOfRange",
    "TruncationTooSmall",
    "BadParameters",
    "HypothesisViolated",
    "NonpositiveMagnitude",
    "ConfigError",
]


class ThetaTwistError(Exception):
    """Base class for thetatwist errors.

    Every subclass carries a short ``category`` used as the heading in
    reports and CLI messages.
    """

    category = "thetatwist error"

    def __str__(self):
        return self.args[0] if self.args else self.category


class NotInvertible(ThetaTwistError):
    category = "Residue not invertible"


class NotPrime(ThetaTwistError):
    category = "Modulus is not prime"


class ResourceLimit(ThetaTwistError):
    category = "Resource limit exceeded"


class BadLeadingCoefficient(ThetaTwistError):
    category = "Leading coefficient is not 1"


class OutOfRange(ThetaTwistError):
    category = "Index out of table range"


class DegenerateGrid(ThetaTwistError):
    category = "Degenerate fitting grid"


class TrivialCharacter(ThetaTwistError):
    category = "Trivial character"


class ModuliNotCoprime(ThetaTwistError):
    category = "Moduli not coprime"


class BadDelta(ThetaTwistError):
    category = "Invalid weight parameter"


class TableTooShort(ThetaTwistError):
    category = "Coefficient table too short"


class QuadratureFailure(ThetaTwistError):
    category = "Quadrature failed to converge"


class ContourOutOfRange(ThetaTwistError):
    category = "Contour abscissa out of range"


class TruncationTooSmall(ThetaTwistError):
    category = "Dual sum truncation too small"


class BadParameters(ThetaTwistError):
    category = "Invalid arc parameters"


class HypothesisViolated(ThetaTwistError):
    category = "Theorem hypothesis violated"


class NonpositiveMagnitude(ThetaTwistError):
    category = "Nonpositive magnitude in fit"


class ConfigError(ThetaTwistError):
    category = "Configuration error"
