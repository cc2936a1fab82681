"""Exception types shared across the harness.

Class names double as wire error codes: the protocol layer converts
CamelCase to UPPER_SNAKE (InsufficientCash -> INSUFFICIENT_CASH).
"""


class HarnessError(Exception):
    """Base class for every error raised by this package."""


# -- market data -------------------------------------------------------------

class MalformedRow(HarnessError):
    pass


class InvariantViolation(HarnessError):
    pass


class NonUniformInterval(HarnessError):
    pass


class EmptyWindow(HarnessError):
    pass


class TooShort(HarnessError):
    pass


# -- indicators --------------------------------------------------------------

class WindowTooLarge(HarnessError):
    pass


# -- transforms --------------------------------------------------------------

class SeriesTooShort(HarnessError):
    pass


class InjectionInfeasible(HarnessError):
    pass


# -- trading simulation ------------------------------------------------------

class InvalidCash(HarnessError):
    pass


class SimFinished(HarnessError):
    pass


class InsufficientCash(HarnessError):
    pass


class InsufficientPosition(HarnessError):
    pass


# -- options -----------------------------------------------------------------

class InvalidInput(HarnessError):
    pass


class ZeroVol(HarnessError):
    pass


class PriceOutOfBounds(HarnessError):
    pass


class NoConvergence(HarnessError):
    pass


class MixedExpiries(HarnessError):
    pass


class EmptyLegs(HarnessError):
    pass


# -- scoring -----------------------------------------------------------------

class MissingCondition(HarnessError):
    pass


class NoActiveSections(HarnessError):
    pass


class DegenerateRange(HarnessError):
    pass


# -- harness -----------------------------------------------------------------

class EmptyPool(HarnessError):
    pass


class MalformedAnswer(HarnessError):
    pass


# -- protocol ----------------------------------------------------------------

class ToolError(HarnessError):
    """Error returned by a tool call, carrying its wire code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class TaskTimeout(HarnessError):
    code = "TIMEOUT"


class MalformedResponse(HarnessError):
    code = "MALFORMED_RESPONSE"


def error_code(exc: Exception) -> str:
    """Wire code for an exception: explicit ``code`` attribute or UPPER_SNAKE class name."""
    code = getattr(exc, "code", None)
    if isinstance(code, str):
        return code
    name = type(exc).__name__
    out = [name[0]]
    for ch in name[1:]:
        if ch.isupper():
            out.append("_")
        out.append(ch)
    return "".join(out).upper()
