"""Exception types shared across the package."""


class ConvDiffError(Exception):
    """Base class for all package errors."""


class InvalidMeshError(ConvDiffError):
    """Mesh construction parameters are invalid (e.g. fewer than 2 cells)."""


class InvalidBasisError(ConvDiffError):
    """Basis identifier is out of range for the mesh."""


class InvalidParameterError(ConvDiffError):
    """A physical or discretization parameter is out of its admissible range."""


class SingularSystemError(ConvDiffError):
    """Direct solve hit a zero pivot that partial pivoting could not recover."""


class InfSupFailureError(ConvDiffError):
    """The saddle-point Schur complement is numerically singular."""


class NotDecoupledError(ConvDiffError):
    """The reduced system does not decouple (even number of subintervals)."""


class PreconditionError(ConvDiffError):
    """An operation was invoked outside its stated preconditions."""


class AccuracyError(ConvDiffError):
    """Requested quadrature tolerance could not be reached.

    Carries the achieved error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
