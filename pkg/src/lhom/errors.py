class LhomError(Exception):
    """Base class for errors raised by this package."""


class InputError(LhomError, ValueError):
    """A caller passed something outside an operation's preconditions."""


class ParseError(InputError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class PreconditionError(LhomError):
    """The template does not meet an algorithm's structural requirement."""


class InternalError(LhomError, RuntimeError):
    """An internal invariant failed; this indicates a bug, not bad input."""
