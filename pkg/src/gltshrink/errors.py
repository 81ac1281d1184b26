"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonConvergenceError(RuntimeError):
    """An iterative evaluation failed to reach the requested accuracy."""


class DegenerateMassError(RuntimeError):
    """The probability mass of a truncation region underflowed."""


class OriginSpikeError(ValueError):
    """A marginal density was evaluated at its infinite spike at the origin.

    Raised instead of returning ``inf`` so that callers (plotting, CSV
    tabulation) can clip deliberately.
    """


class InvalidStateError(RuntimeError):
    """A sampler state violates its support invariants."""


class InsufficientDrawsError(ValueError):
    """Too few kept draws to compute the requested summary."""


class SamplerAbort(RuntimeError):
    """A chain aborted due to repeated numerical failures."""
