"""Exception and warning types raised across the package."""

from __future__ import annotations


class TensorInterpError(ValueError):
    """Base class for all errors raised by tensorp."""


class InvalidRotation(TensorInterpError):
    pass


class NotSymmetric(TensorInterpError):
    pass


class NotInvertible(TensorInterpError):
    pass


class NegativeDeterminant(TensorInterpError):
    pass


class NotSPD(TensorInterpError):
    pass


class SingularMoment(TensorInterpError):
    """Moment matrix of a least-squares fit is singular or too ill-conditioned."""


class NonPositiveEigenvalue(TensorInterpError):
    pass


class NoConvergence(TensorInterpError):
    pass


class HemisphereViolation(TensorInterpError):
    pass


class AntipodalPair(TensorInterpError):
    pass


class EmptyDataSet(TensorInterpError):
    pass


class OutOfDomain(TensorInterpError):
    pass


class AmbiguousOrientation(UserWarning):
    """Eigenvector sign choice is close to the +-pi/2 tie."""


class DegeneratePrimary(UserWarning):
    """Largest eigenvalue is (nearly) repeated; primary direction is not unique."""


class BasisDegraded(UserWarning):
    """Polynomial basis order was lowered because the neighborhood is too small."""


class InputFormatError(TensorInterpError):
    """Malformed record in a tensor field file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
