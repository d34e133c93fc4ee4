"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised for malformed or incompatible inputs (shape/spec mismatches,
    unknown profiles, unparseable instance files). Maps to CLI exit code 3."""


class PreconditionError(InputError):
    """Raised when an operation's mathematical precondition fails
    (element not positive, bound not strictly nonzero, non-central
    multiplier, singular frame operator, failed audit hypothesis)."""


class AtomicSystemError(PreconditionError):
    """Raised when a family is not an atomic system for the given operator
    (range inclusion fails beyond tolerance)."""
