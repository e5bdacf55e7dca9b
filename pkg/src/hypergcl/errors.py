"""Exception types shared across the package."""


class HyperGCLError(Exception):
    """Base class for all package-specific errors."""


class ParseError(HyperGCLError):
    """A data file could not be parsed (message carries the line number)."""


class ConfigError(HyperGCLError):
    """A configuration value is missing, unknown, or out of range."""


class ContractViolation(HyperGCLError):
    """An internal pre/postcondition was violated (shape mismatch, NaN, ...)."""


class DivergenceError(HyperGCLError):
    """Training produced a non-finite loss; carries component diagnostics."""

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = dict(components or {})
