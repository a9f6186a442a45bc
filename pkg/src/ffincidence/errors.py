"""Exception types raised across the package."""


class FFIError(Exception):
    """Base class for all package errors."""


class NonPrime(FFIError, ValueError):
    pass


class EvenCharacteristic(FFIError, ValueError):
    pass


class ReducibleModulus(FFIError, ValueError):
    pass


class DivisionByZero(FFIError, ZeroDivisionError):
    pass


class BudgetExceeded(FFIError, RuntimeError):
    pass


class RootOrderMismatch(FFIError, ValueError):
    pass


class ZeroParameter(FFIError, ValueError):
    pass


class DimensionMismatch(FFIError, ValueError):
    pass


class UnsupportedCase(FFIError, ValueError):
    pass


class UnsupportedRadiusClass(FFIError, ValueError):
    pass


class ZeroDistance(FFIError, ValueError):
    pass


class PopulationTooSmall(FFIError, ValueError):
    pass
