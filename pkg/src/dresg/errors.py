"""Exception hierarchy shared by the simulator modules."""


class DresgError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(DresgError, ValueError):
    """A parameter or config value is out of its allowed range.

    ``field`` names the offending parameter so callers (and the CLI) can
    report it directly.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidHopError(DresgError, ValueError):
    pass


class DimensionError(DresgError, ValueError):
    pass


class CapacityError(DresgError, ValueError):
    pass


class EmptyPoolError(DresgError, LookupError):
    pass


class InfeasibleLinkError(DresgError):
    """No (power, rate) pair closes the link budget at distance ``distance``."""

    def __init__(self, distance: float, shortfall_db: float):
        self.distance = distance
        self.shortfall_db = shortfall_db
        super().__init__(
            f"no feasible transmission configuration at {distance:.3f} m "
            f"(best shortfall {shortfall_db:.3f} dB)"
        )


class InfeasibleActionError(DresgError):
    def __init__(self, ring: int, action, cause: InfeasibleLinkError | None = None):
        self.ring = ring
        self.action = action
        self.cause = cause
        detail = f": {cause}" if cause is not None else ""
        super().__init__(f"action {action} infeasible at ring {ring}{detail}")


class DegenerateNetworkError(DresgError):
    pass


class ConfigurationError(DresgError):
    pass


class ComparisonError(DresgError, ValueError):
    pass
