"""Exception types shared across the library."""


class WigmajError(Exception):
    """Base class for all library-specific errors."""


class NotPositiveDefinite(WigmajError):
    """A matrix required to be positive definite is not."""


class NotSPD(NotPositiveDefinite):
    """A matrix required to be symmetric positive definite is not."""


class ZeroMode(WigmajError):
    """A dispersion relation produced a vanishing mode frequency."""


class PureModeError(WigmajError):
    """A symplectic eigenvalue sits at the pure-state boundary 1/2."""


class BoxTooSmall(WigmajError):
    """The occupation-number box cannot reach the requested tail mass."""


class Inconclusive(WigmajError):
    """A prefix comparison cannot certify any verdict."""


class TolExceeded(WigmajError):
    """A refinement test disagreed beyond the configured tolerance."""


class RootFindingFailure(WigmajError):
    """Bracketing could not isolate a level-set crossing."""


class CrossCheckMismatch(WigmajError):
    """Two equivalent majorization conditions disagreed in sign."""


class NoCollapse(WigmajError):
    """Regulated margins failed to collapse along the cutoff schedule."""


class NotIntegrable(WigmajError):
    """The requested integral does not exist for this state."""


class DomainError(WigmajError):
    """An argument lies outside the mathematically valid domain."""


class ParamOutOfRange(WigmajError):
    """A channel or state parameter violates its documented range."""


class DimensionMismatch(WigmajError):
    """Mode counts or matrix shapes are incompatible."""


class SingularY(WigmajError):
    """The noise matrix is singular but nonzero, so no kernel exists."""


class InsufficientMargin(WigmajError):
    """A strict-hypothesis statement was invoked without a strict gap."""


class NotFound(WigmajError):
    """No constructive witness applies (not a proof of non-existence)."""


class SchemaError(WigmajError):
    """A JSON document does not match the expected schema."""
