"""Exception hierarchy shared by the engine, the checks and the session layer.

``exit_code`` is the CLI exit status a failure maps to. Usage and definition
errors are 2; exit 1 is reserved for counterexamples found by checks.
"""


class TraceEngineError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = 2


class FieldMismatchError(TraceEngineError):
    pass


class ZeroDivisionInFieldError(TraceEngineError):
    pass


class ZeroRingError(TraceEngineError):
    pass


class RingMismatchError(TraceEngineError):
    pass


class NotAnIdealError(TraceEngineError):
    pass


class NotASubmoduleError(TraceEngineError):
    pass


class NotArtinianError(TraceEngineError):
    pass


class NotGorensteinError(TraceEngineError):
    pass


class NotLocalError(TraceEngineError):
    pass


class ConfigurationError(TraceEngineError):
    pass


class InvalidArgumentError(TraceEngineError, ValueError):
    """An index or option outside the range an operation accepts."""


class GradingRequiredError(TraceEngineError):
    """The operation needs a graded or Artinian local module."""


class PolynomialSyntaxError(TraceEngineError):
    pass


class SessionSyntaxError(TraceEngineError):
    """Parse failure in a session script, positioned at line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class SessionError(TraceEngineError):
    """A statement of a session failed; keeps the exit code of the cause."""

    def __init__(self, statement: str, cause: TraceEngineError):
        self.statement = statement
        self.cause = cause
        self.exit_code = cause.exit_code
        super().__init__(f"Error executing {statement}: {type(cause).__name__}: {cause}")


class ResourceCapExceeded(TraceEngineError):
    exit_code = 3


class EngineDisagreement(TraceEngineError):
    """Two independent computations of the same quantity differ."""

    exit_code = 4
