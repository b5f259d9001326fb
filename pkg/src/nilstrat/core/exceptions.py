"""Exception hierarchy shared by every nilstrat package.

Two families map onto CLI exit codes: ``InputError`` (exit 2) means the
caller handed us something malformed, ``CheckFailure`` (exit 1) means the
input was fine but a mathematical check did not go through.
"""

from typing import Any, Dict, Optional


class NilstratError(Exception):
    """Base class for all nilstrat errors"""

    exit_code = 2
    kind = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {key: str(value) for key, value in sorted(self.details.items())},
        }


class InputError(NilstratError):
    """Malformed or inconsistent input"""

    exit_code = 2
    kind = "input-error"


class CheckFailure(NilstratError):
    """A mathematical check failed on well-formed input"""

    exit_code = 1
    kind = "check-failed"


# Input errors

class ParseError(InputError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        details = {}
        if line is not None:
            details["line"] = line
        if field is not None:
            details["field"] = field
        super().__init__(message, **details)
        self.line = line
        self.field = field


class ValidationError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotABasis(InputError):
    pass


class DependentSpanningSet(InputError):
    pass


class NotASubalgebra(InputError):
    pass


class NotAnIdeal(InputError):
    pass


class FlagMismatch(InputError):
    pass


class ChainNotInFlag(InputError):
    pass


class UnsupportedSize(InputError):
    pass


class SampleBudgetExhausted(InputError):
    pass


class NonSkew(InputError):
    pass


# Check failures

class NotNilpotent(CheckFailure):
    pass


class DegenerateOrbit(CheckFailure):
    pass


class NotInX(CheckFailure):
    pass


class EliminationStuck(CheckFailure):
    pass


class HypothesisFailed(CheckFailure):
    pass


class PreconditionFailed(CheckFailure):
    def __init__(self, message: str, clause: str, **details: Any):
        super().__init__(message, clause=clause, **details)
        self.clause = clause


class NotApplicable(CheckFailure):
    pass


class InvariantViolation(CheckFailure):
    pass
