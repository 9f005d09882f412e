"""Exception types shared across the package.

Every failure mode raised deliberately by this package derives from
:class:`EpscanError`, so callers can catch one base class at the CLI boundary.
Names describe the condition, not the routine that raised it.
"""

from __future__ import annotations

__all__ = [
    "EpscanError",
    "NonConvergence",
    "DefectiveMatrix",
    "DimensionMismatch",
    "IndexOutOfRange",
    "VanishingDenominator",
    "InvalidParams",
    "SingleQubitEP",
    "InvalidLabel",
    "NotPTSymmetric",
    "EmptyContour",
    "RankDeficient",
    "ParityAmbiguous",
    "TrackingAmbiguous",
    "AmbiguousCase",
]


class EpscanError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergence(EpscanError):
    """An iterative routine exhausted its budget without meeting its tolerance."""


class DefectiveMatrix(EpscanError):
    """Left/right eigenvector overlap is numerically singular.

    This is the generic signature of an exceptional point: at least one
    left/right pair has vanishing overlap and the matrix cannot be
    binormalized to the requested tolerance.
    """


class DimensionMismatch(EpscanError, ValueError):
    """Operands do not share the expected shape."""


class IndexOutOfRange(EpscanError, IndexError):
    """A level index falls outside the eigensystem dimension."""


class VanishingDenominator(EpscanError):
    """An energy denominator between the two sectors is numerically zero."""


class InvalidParams(EpscanError, ValueError):
    """Physical parameters violate their domain constraints."""


class SingleQubitEP(EpscanError):
    """The single-qubit eigenproblem is defective (gamma at the qubit EP)."""


class InvalidLabel(EpscanError, ValueError):
    """A two-spin state label is not one of '++', '+-', '-+', '--'."""


class NotPTSymmetric(EpscanError):
    """A matrix fails the pseudo-Hermiticity check it is required to satisfy."""


class EmptyContour(EpscanError):
    """No zero contour of the discriminant intersects the requested window."""


class RankDeficient(EpscanError):
    """A matrix fails the rank condition required at a third-order EP."""


class ParityAmbiguous(EpscanError):
    """A parity expectation value is too far from +-1 to assign an index."""


class TrackingAmbiguous(EpscanError):
    """Best eigenvector overlap between sweep steps fell below the floor."""


class AmbiguousCase(EpscanError):
    """A depressed cubic matches none or several of the perturbative cases."""
