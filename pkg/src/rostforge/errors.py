"""Exception types shared across the package."""


class RostforgeError(Exception):
    """Base class for all package errors."""


class FieldError(RostforgeError, ValueError):
    """Malformed field descriptor or element."""


class NotComputable(RostforgeError):
    """A well-posed request outside the implemented carriers."""


class NonTerminating(RostforgeError):
    """The rewriter exhausted its step budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ParseError(RostforgeError, ValueError):
    """DSL parse failure with a source position."""

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        super().__init__(message)

    def diagnostic(self):
        return f"{self.args[0]}\n  {self.text}\n  {' ' * self.pos}^"
