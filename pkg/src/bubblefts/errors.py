"""Exception hierarchy for the bubblefts package."""


class BubbleFtsError(Exception):
    """Base class for all package errors."""


# --- price series ingestion -------------------------------------------------

class EmptyInput(BubbleFtsError):
    pass


class MalformedRow(BubbleFtsError):
    def __init__(self, line_no: int, content: str = ""):
        self.line_no = line_no
        self.content = content
        super().__init__(f"malformed row at line {line_no}: {content!r}")


class NonPositivePrice(BubbleFtsError):
    def __init__(self, line_no: int, value: float):
        self.line_no = line_no
        self.value = value
        super().__init__(f"non-positive price {value} at line {line_no}")


class DuplicateDate(BubbleFtsError):
    def __init__(self, date):
        self.date = date
        super().__init__(f"duplicate date {date}")


class NetworkError(BubbleFtsError):
    pass


class Timeout(NetworkError):
    pass


class HttpStatus(NetworkError):
    def __init__(self, code: int):
        self.code = code
        super().__init__(f"HTTP status {code}")


class WindowOutOfRange(BubbleFtsError):
    pass


class SeriesTooShort(BubbleFtsError):
    pass


# --- models -----------------------------------------------------------------

class InvalidStep(BubbleFtsError):
    pass


class PastSingularity(BubbleFtsError):
    """Closed form evaluated at or beyond the critical time."""


class Blowup(BubbleFtsError):
    """SDE path exceeded the overflow guard or crossed its critical time.

    Carries the step index where the guard tripped and the partial path so
    far, so callers can inspect the truncated trajectory.
    """

    def __init__(self, step_index: int, partial=None):
        self.step_index = step_index
        self.partial = partial
        super().__init__(f"simulation halted at step {step_index}")


# --- transform --------------------------------------------------------------

class InvalidSearchPoint(BubbleFtsError):
    pass


class DomainViolation(BubbleFtsError):
    """Log-price exceeds the candidate ceiling somewhere in the window."""


class EmptySeries(BubbleFtsError):
    pass


# --- unit root test ---------------------------------------------------------

class DegenerateRegressor(BubbleFtsError):
    """Sum of squared lagged levels is zero; the regression is undefined."""


class ZeroResidualVariance(BubbleFtsError):
    """Regression residuals are exactly zero; the t statistic is undefined."""


class MissingLength(BubbleFtsError):
    def __init__(self, length: int):
        self.length = length
        super().__init__(f"no critical value tabulated for series length {length}")


class InsufficientReps(BubbleFtsError):
    pass


# --- calibration ------------------------------------------------------------

class WindowLengthMismatch(BubbleFtsError):
    pass


# --- agents -----------------------------------------------------------------

class PastCriticalTime(BubbleFtsError):
    pass


class NoInteriorExit(BubbleFtsError):
    """The first-order condition has no sign change inside the bracket."""

    def __init__(self, bracket=None, message="no interior exit time"):
        self.bracket = bracket
        super().__init__(message)


# --- cli --------------------------------------------------------------------

class UsageError(BubbleFtsError):
    pass
