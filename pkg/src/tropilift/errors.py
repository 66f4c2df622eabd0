"""Exception hierarchy shared by every module."""


class TropiliftError(Exception):
    """Base class."""


class ValidationError(TropiliftError):
    """Input violates a model invariant."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class ParseError(ValidationError):
    """Malformed JSON input; ``path`` is a JSON pointer to the culprit."""

    def __init__(self, message, path=""):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path or "/"


class NotHarmonicError(TropiliftError):
    pass


class RefusedComputation(TropiliftError):
    """The request is well formed but outside what we compute (wild char, R < 0)."""
