"""Exception types shared across the package."""


class CobosonError(Exception):
    """Base class for all errors raised by coboson_stats."""


class ProfileError(CobosonError, ValueError):
    """Invalid mode profile, weights, or profile file."""


class MissingLambdaError(CobosonError, ValueError):
    """The exchange table is too short for the requested computation."""


class BlockedStateError(CobosonError):
    """The N-coboson state vanishes (F_N = 0), so averages are undefined."""

    def __init__(self, N, message=None):
        self.N = N
        super().__init__(message or f"state with N={N} is Pauli-blocked (F_N = 0)")


class PrecisionDomainError(CobosonError):
    """A float-mode quantity lies beyond the range where round-off is controlled."""

    def __init__(self, message, last_reliable_n=None):
        self.last_reliable_n = last_reliable_n
        super().__init__(message)


class QuadratureError(CobosonError):
    """Numerical integration did not reach the requested tolerance."""


class IrrationalQuantityError(CobosonError):
    """An oracle quantity was requested that is not exactly rational."""
