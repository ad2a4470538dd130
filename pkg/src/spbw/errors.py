"""Exception hierarchy shared by the engine and the command line front-end."""

from __future__ import annotations


class SPBWError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(SPBWError, ZeroDivisionError):
    pass


class ZeroDivisor(SPBWError, ZeroDivisionError):
    pass


class DomainViolation(SPBWError, ValueError):
    """Negative exponent on a coefficient variable that is not Laurent-flagged."""


class DimensionMismatch(SPBWError, ValueError):
    pass


class ConstantInF(SPBWError, ValueError):
    pass


class CapsExceeded(SPBWError):
    def __init__(self, cap: str, limit: int):
        super().__init__(f"cap {cap}={limit} exceeded")
        self.cap = cap
        self.limit = limit


class NoScalarRatio(SPBWError, ValueError):
    """Leading coefficients are not K-proportional (only possible when R != K)."""


class EmptyRepresentation(SPBWError, ValueError):
    pass


class CoefficientRingNotScalar(SPBWError, ValueError):
    pass


class ExprSyntaxError(SPBWError, ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")
        self.position = position
        self.text = text


class UnknownName(SPBWError, KeyError):
    def __init__(self, name: str, position: int | None = None):
        super().__init__(name)
        self.name = name
        self.position = position

    def __str__(self) -> str:
        where = f" at position {self.position}" if self.position is not None else ""
        return f"unknown name {self.name!r}{where}"


class SchemaError(SPBWError, ValueError):
    pass


class ValidationErrors(SPBWError):
    """Aggregate of every problem found while validating a presentation."""

    def __init__(self, issues: list):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))

    def kinds(self) -> set[str]:
        return {type(i).__name__ for i in self.issues}
