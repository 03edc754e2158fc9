"""Exception hierarchy.

All errors raised on purpose by the package derive from
:class:`TripletError`, so callers can tell them apart from numpy or
Python built-ins.
"""


class TripletError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(TripletError, ValueError):
    """Raised when array shapes do not fit the spaces involved."""


class InvalidGram(TripletError, ValueError):
    """Raised when a Gram matrix is not Hermitian or not invertible."""


class NonIsometric(TripletError, ValueError):
    """Raised when an operator expected to be isometric is not.

    The ``defect`` attribute holds the norm of the Gram difference.
    """

    def __init__(self, msg, defect=None):
        super().__init__(msg)
        self.defect = defect


class NotInvertible(TripletError):
    """Raised when ``(T - lambda)^{-1}`` is not an everywhere defined operator."""

    def __init__(self, msg, lam=None):
        super().__init__(msg)
        self.lam = lam


class DegeneratePencil(TripletError):
    """Raised when every complex number is an eigenvalue of a relation."""


class InfeasibleKappa1(TripletError, ValueError):
    """Raised when no boundary space pair with the requested negative index exists."""


class GammaNotInvertible(TripletError):
    """Raised when a boundary map restricted to a defect space is singular."""

    def __init__(self, msg, lam=None):
        super().__init__(msg)
        self.lam = lam


class RegionError(TripletError, ValueError):
    """Raised when a spectral parameter lies outside the admissible region."""


class PencilSingular(TripletError):
    """Raised when the boundary pencil of an extension is not invertible."""

    def __init__(self, msg, lam=None):
        super().__init__(msg)
        self.lam = lam


class SingularShift(TripletError, ValueError):
    """Raised when the Moebius centre is an eigenvalue of the operator."""


class SingularAtLambda(TripletError):
    """Raised when ``I - lambda T`` is singular for a colligation."""


class NotRegular(TripletError):
    """Raised when the non-minimal part of an extension is not a Hilbert space."""


class SchemaError(TripletError, ValueError):
    """Raised for malformed instance files.  ``errors`` lists every problem found."""

    def __init__(self, msg, errors=()):
        super().__init__(msg)
        self.errors = list(errors)
