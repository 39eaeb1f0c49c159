"""Exception hierarchy shared across the package."""


class LoewnerLabError(Exception):
    """Base class for all package errors."""


class DomainError(LoewnerLabError):
    """Input outside the admissible domain (coincident points, bad parameter)."""


class CollisionFailure(LoewnerLabError):
    """Particle ordering could not be preserved after the maximum number of retries."""


class NumericalBlowup(LoewnerLabError):
    """A simulated quantity became non-finite."""


class GridError(LoewnerLabError):
    """A requested time or spacing is incompatible with the discretization grid."""


class StiffnessFailure(LoewnerLabError):
    """ODE step collapsed below the minimum step size."""


class InversionFailure(LoewnerLabError):
    """Reverse-flow trajectory left the domain."""


class SingularityError(LoewnerLabError):
    """Evaluation requested at a singular point of a kernel or decoration."""


class AdmissibilityError(LoewnerLabError):
    """Functional not admissible for the requested boundary condition."""


class FactorizationError(LoewnerLabError):
    """Covariance matrix is not positive semidefinite within tolerance."""


class SupportError(LoewnerLabError):
    """Functional support intersects the slit set."""


class EarlyStopError(LoewnerLabError):
    """A tracked point was swallowed before the requested horizon."""

    def __init__(self, message, usable_horizon=None):
        super().__init__(message)
        self.usable_horizon = usable_horizon


class TruncatedComparison(LoewnerLabError):
    """Traces left the comparable region before the comparison finished."""


class PoorFitWarning(UserWarning):
    """Capacity fit residual above threshold; carried in results, not raised."""
