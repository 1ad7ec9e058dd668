"""Exception types shared across the toolkit."""


class OdeHazardError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(OdeHazardError):
    """Model parameters violate a validity constraint."""


class IntegrationBlowupError(OdeHazardError):
    """A Runge-Kutta stage produced a non-finite value."""

    def __init__(self, t: float, detail: str = ""):
        self.t = t
        msg = f"integration blew up at t={t:.6g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class RangeError(OdeHazardError):
    """Interpolation requested outside the stored grid."""


class HorizonExhaustedError(OdeHazardError):
    """Cumulative-hazard inversion ran out of horizon before reaching its target."""

    def __init__(self, target: float, reached: float, horizon: float):
        self.target = target
        self.reached = reached
        self.horizon = horizon
        super().__init__(
            f"H({horizon:.6g})={reached:.6g} never reached inversion target "
            f"{target:.6g}; extend max_horizon or check the model"
        )


class DataFormatError(OdeHazardError):
    """A dataset file could not be parsed under the requested convention."""


class ConfigError(OdeHazardError):
    """A run configuration is missing keys or contains bad values."""
