"""Named errors raised by the specred modules.

Every error carries a ``context`` dict so the CLI can report it as a
structured document (``{"error": name, "message": ..., "context": ...}``).
"""

from typing import Any


class SpecredError(ValueError):
    """Base class for all module errors."""

    def __init__(self, message: str = "", **context: Any) -> None:
        super().__init__(message or self.__class__.__name__)
        self.context: dict[str, Any] = context

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": self.name,
            "message": str(self),
            "context": {key: _plain(value) for key, value in self.context.items()},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return str(value)


# ratfun
class ZeroDenominator(SpecredError):
    pass


class DivisionByZeroFunction(SpecredError):
    pass


class EvaluationAtPole(SpecredError):
    pass


class NotProper(SpecredError):
    pass


class IllConditionedRoots(SpecredError):
    pass


class IrrationalPoles(SpecredError):
    pass


# ratmat
class DimensionMismatch(SpecredError):
    pass


class SingularOverFunctionField(SpecredError):
    pass


# reduction
class EmptySubset(SpecredError):
    pass


class UnknownLabel(SpecredError):
    pass


class FrameNotOrthonormal(SpecredError):
    pass


class SubsetViolation(SpecredError):
    pass


class NotAnEigenpair(SpecredError):
    pass


class BruteForceTooLarge(SpecredError):
    pass


class NotNormalF(SpecredError):
    pass


class NotAUnitaryCompletion(SpecredError):
    pass


# graphs
class NotEquitable(SpecredError):
    pass


class DisconnectedGraph(SpecredError):
    pass


class InvalidPattern(SpecredError):
    pass


class DivisorMismatch(SpecredError):
    pass


# unfolding
class NotHermitianFeasible(SpecredError):
    def __init__(self, message: str = "", report: Any = None, **context: Any) -> None:
        super().__init__(message, **context)
        self.report = report


class ConstantPartNotHollow(SpecredError):
    pass


class NotHermitian(SpecredError):
    pass


class SingularQ(SpecredError):
    pass


class NotRealSymmetric(SpecredError):
    pass


class RoundTripFailure(SpecredError):
    pass


# quantumwalk
class SingularTransform(SpecredError):
    pass


class ReductionsDiffer(SpecredError):
    pass


# cli
class ParseError(SpecredError):
    pass
