"""Exception hierarchy with stable machine-readable codes."""


class SloshingError(Exception):
    """Base class. ``code`` is stable and appears in CLI error output."""

    code = "error"


class InputError(SloshingError, ValueError):
    """Malformed or out-of-contract input."""

    code = "input"


class DomainError(InputError):
    """Argument outside [-1, 1] where a polynomial is defined."""

    code = "domain"


class MomentConditionError(InputError):
    """A moment condition on the tangential derivative is violated."""

    code = "moment-condition"


class MassConditionError(InputError):
    """Data violates the conserved-volume condition."""

    code = "mass-condition"


class AdmissibilityError(InputError):
    """Weight decays faster than sqrt(1 - x^2) at the contact points."""

    code = "admissibility"


class NearSingularError(InputError):
    """Evaluation point too close to a kernel singularity."""

    code = "near-singular"


class ThresholdError(InputError):
    """Horizon below the observability threshold."""

    code = "observability-threshold"


class ResolutionError(SloshingError):
    """Discretization too coarse for the requested accuracy."""

    code = "resolution"


class ConditioningError(SloshingError):
    """Linear system too ill-conditioned to trust."""

    code = "ill-conditioned"


class PlacementError(ConditioningError):
    """Injection points give a singular or ill-conditioned system."""

    code = "placement"
