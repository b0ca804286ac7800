"""Exception and warning types shared across the package."""


class PreconditionError(ValueError):
    """A mathematical precondition of an operation is violated.

    The CLI maps this to exit code 2.
    """


class ChainFormatError(ValueError):
    """A transition-matrix file or value is malformed (exit code 1 in the CLI)."""


class NonUniqueStationaryError(PreconditionError):
    """The chain has several recurrent classes, so the stationary law is not unique."""


class InvariantViolation(RuntimeError):
    """A consequence that must hold by theorem failed numerically; indicates a bug."""


class RateCheckError(RuntimeError):
    """Spectral rate and the observed total variation decay disagree beyond tolerance."""


class NonUniqueStationaryWarning(UserWarning):
    """Emitted when a stationary distribution is returned for a reducible chain."""


class DecayWindowWarning(UserWarning):
    """The decay cross-check window cannot resolve a rate this close to one."""
