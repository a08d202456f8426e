"""Exception types raised by the package."""


class SchoenbergError(Exception):
    """Base class for all package errors."""


class DomainError(SchoenbergError, ValueError):
    """An argument lies outside the domain of a function."""


class CapExceededError(SchoenbergError, ValueError):
    """A symbolic computation was requested above its configured degree cap."""


class QuadratureError(SchoenbergError, ArithmeticError):
    """A quadrature rule could not be built or an integral did not converge."""


class GroupAxiomError(SchoenbergError, ValueError):
    """A multiplication table violates a group axiom.

    ``witness`` holds the offending elements, e.g. ``(a, b, c)`` for a failed
    associativity check.
    """

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class NotHermitianError(SchoenbergError, ValueError):
    """A matrix that must be hermitian is not, beyond tolerance.

    ``witness`` is the index pair ``(i, j)`` with the largest violation of
    ``M[i, j] == conj(M[j, i])``.
    """

    def __init__(self, message, witness=(), violation=0.0):
        super().__init__(message)
        self.witness = tuple(witness)
        self.violation = violation


class NegativeCoefficientError(SchoenbergError, ValueError):
    """A coefficient that must be nonnegative came out negative."""


class SmoothnessError(SchoenbergError, ValueError):
    """A derivative was requested beyond a model's declared smoothness."""
