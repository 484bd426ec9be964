"""Exception types raised by tau2pf."""


class Tau2Error(Exception):
    """Base class for all library errors."""


class CapacityError(Tau2Error):
    """A requested size exceeds a configured bound."""


class BackendMismatchError(Tau2Error, TypeError):
    """Operands belong to different scalar backends or fields."""


class SpaceMismatchError(Tau2Error, ValueError):
    """Operators act on different chain spaces."""


class NotMonomialError(Tau2Error, ValueError):
    pass


class DegeneracyError(Tau2Error, ArithmeticError):
    """Spectral data too close to degenerate to be labeled reliably."""


class SingularModelError(Tau2Error, ArithmeticError):
    pass


class LabelingError(Tau2Error):
    pass


class ConsistencyError(Tau2Error):
    """An internal identity that must hold by construction failed."""


class ConfigError(Tau2Error, ValueError):
    """Invalid run configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
