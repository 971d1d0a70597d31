"""Exception hierarchy shared by all fracmem modules."""


class FracmemError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FracmemError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (e.g. Gamma at 0, -1, -2, ...)."""


class ConvergenceError(FracmemError, RuntimeError):
    """A series or iteration failed to reach the requested tolerance."""


class DistributionalKernelError(FracmemError, ValueError):
    """A purely distributional kernel was used where pointwise values are needed."""


class IntegrabilityError(FracmemError, RuntimeError):
    """An integral failed to converge, typically a non-integrable kernel."""


class MissingDerivativeError(FracmemError, ValueError):
    """A signal does not supply the derivatives an operator requires."""


class UnsupportedRangeError(FracmemError, ValueError):
    """An order range the implementation deliberately does not cover."""


class ResolutionError(FracmemError, ValueError):
    """A grid is too coarse to resolve the requested feature."""


class CsvFormatError(FracmemError, ValueError):
    """Malformed delimited data; carries the offending 1-based row number."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)


class ConfigError(FracmemError, ValueError):
    """Invalid scenario configuration (unknown key, bad value, missing input)."""
