"""Exception hierarchy shared by every module."""


class TsbError(Exception):
    """Base class for all errors raised by tsbalance."""


class ParseError(TsbError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(TsbError):
    pass


class DisconnectedError(TsbError):
    def __init__(self, u: int, v: int):
        self.u = u
        self.v = v
        super().__init__(f"graph is disconnected: vertex {v} is unreachable from vertex {u}")


class GuardError(TsbError):
    """Input exceeds a configured size guard."""
