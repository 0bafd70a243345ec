"""Exception hierarchy.

Every error carries a ``kind`` (the stable name used in CLI error records)
and an ``exit_code`` used by the command line front end.
"""

from __future__ import annotations


class DiscvalError(Exception):
    kind = "Error"
    exit_code = 1

    def __init__(self, detail: str = "", **extra):
        super().__init__(detail)
        self.detail = detail
        self.extra = extra

    def to_record(self) -> dict:
        rec = {"kind": self.kind, "detail": self.detail}
        rec.update(self.extra)
        return rec


# usage / input errors -> exit 2

class UsageError(DiscvalError):
    kind = "UsageError"
    exit_code = 2


class DivisionByZero(UsageError, ZeroDivisionError):
    kind = "DivisionByZero"


class VariableMismatch(UsageError):
    kind = "VariableMismatch"


class NonPositiveOrderImage(UsageError):
    kind = "NonPositiveOrderImage"


class InvalidSpec(UsageError):
    kind = "InvalidSpec"


class ZeroInput(UsageError):
    kind = "ZeroInput"


class NonUnitInput(UsageError):
    kind = "NonUnitInput"


class ZeroImage(UsageError):
    """A nonzero element was sent to the exact zero series (map not injective)."""
    kind = "ZeroImage"


class ExprSyntaxError(UsageError):
    kind = "SyntaxError"

    def __init__(self, detail: str = "", position: int | None = None, **extra):
        super().__init__(detail, position=position, **extra)
        self.position = position


class UnknownVariable(ExprSyntaxError):
    kind = "UnknownVariable"


class NegativeExponent(ExprSyntaxError):
    kind = "NegativeExponent"


# precision horizon -> exit 3

class PrecisionExhausted(DiscvalError):
    """No nonzero term found up to the known precision.

    The series may still be nonzero beyond the horizon; rebuild at a higher
    precision and retry.
    """
    kind = "PrecisionExhausted"
    exit_code = 3

    def __init__(self, detail: str = "", horizons=None, **extra):
        horizons = list(horizons or [])
        super().__init__(detail, horizons=horizons, **extra)
        self.horizons = horizons


# budget -> exit 4

class IterationBudgetExceeded(DiscvalError):
    kind = "IterationBudgetExceeded"
    exit_code = 4

    def __init__(self, detail: str = "", transcript=None, **extra):
        transcript = list(transcript or [])
        super().__init__(detail, transcript=transcript, **extra)
        self.transcript = transcript


# defect signals -> exit 5

class InternalInconsistency(DiscvalError):
    kind = "InternalInconsistency"
    exit_code = 5


class WitnessCheckFailed(InternalInconsistency):
    kind = "WitnessCheckFailed"


class NotAUnit(InternalInconsistency):
    kind = "NotAUnit"
