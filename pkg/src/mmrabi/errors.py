class NumericalError(RuntimeError):
    """A numerical routine failed or produced an unphysical result."""


class BogoliubovError(NumericalError):
    pass


class TruncationError(ValueError):
    """The Hilbert-space budget cannot accommodate the requested truncation."""


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
