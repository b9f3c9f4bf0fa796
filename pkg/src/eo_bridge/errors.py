"""Exception types raised by eo_bridge."""


class EOBridgeError(Exception):
    """Base class for all package errors."""


class DomainError(EOBridgeError, ValueError):
    """A physical parameter is outside its allowed domain."""

    def __init__(self, field, value, reason="must be strictly positive"):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")


class SingularityError(EOBridgeError, ZeroDivisionError):
    """A transfer function was evaluated on one of its poles."""


class ThresholdError(EOBridgeError):
    """Blue-sideband quantity requested at or above the oscillation threshold."""

    def __init__(self, G0, what="spectral quantities"):
        self.G0 = G0
        super().__init__(
            f"G0={G0:.6g} is at or above the parametric oscillation threshold "
            f"(G0 >= 1); {what} are undefined"
        )


class DivergenceError(EOBridgeError):
    """A time-domain integration grew without bound."""


class ConvergenceError(EOBridgeError):
    """A time-domain integration did not settle to a steady state."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class GridError(EOBridgeError, ValueError):
    """A sweep grid is empty or malformed."""


class ConfigError(EOBridgeError):
    """A run configuration could not be parsed."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
