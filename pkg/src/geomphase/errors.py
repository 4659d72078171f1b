"""Exception and warning types shared across the package."""


class PhysicsDomainError(ValueError):
    """A physical precondition failed (resonance, vanishing denominator, bad ratio)."""

    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check


class OracleError(RuntimeError):
    """The numerical Schrodinger integration could not be trusted."""


class ConfigError(ValueError):
    """A scenario file or command-line argument is malformed."""


class PerturbativeValidityWarning(UserWarning):
    """Transverse-to-longitudinal ratio is large enough to spoil low-order expansions."""
