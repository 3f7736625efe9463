"""Shared exception types."""


class ParseError(ValueError):
    """A file could not be parsed (wrong field count, bad number, ...)."""

    def __init__(self, message, path=None, line=None):
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class ValidationError(ValueError):
    """Input data violates a documented invariant."""

    def __init__(self, message, path=None, line=None):
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line
