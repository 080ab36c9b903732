"""Exception types and the shared Verdict record for checks.

Every check in the engine either returns a :class:`Verdict` (for properties
that are *tested*, with a witness on failure) or raises one of the typed
errors below (for contract violations that make further computation
meaningless).  Inconsistency of a linear system is never an error; absence
is returned as a value.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class EngineError(Exception):
    """Base class for all engine errors."""


class GroupTooLarge(EngineError):
    pass


class OwnerMismatch(EngineError):
    pass


class MembershipViolation(EngineError):
    pass


class BlockViolation(EngineError):
    """A subspace basis vector mixes coordinates from distinct blocks."""


class NotHomogeneous(EngineError):
    pass


class NotHSubcomodule(EngineError):
    """An element mixes distinct group degrees."""


class NotACoideal(EngineError):
    pass


class NotActionStable(EngineError):
    """The ideal generated by the relations is not stable under the group action."""


class DegreeOverflow(EngineError):
    """An operation would need data beyond the truncation degree."""


class CoidealViolation(EngineError):
    pass


class FreenessFailed(EngineError):
    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class NoSection(EngineError):
    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class FactorizationFailed(EngineError):
    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class NotBijective(EngineError):
    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class DslError(EngineError):
    """Base class for errors raised while reading a specification document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        pos = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + pos)
        self.line = line
        self.column = column


class DslSyntaxError(DslError):
    pass


class DslNameError(DslError):
    pass


class DslArityError(DslError):
    pass


class ElaborationError(DslError):
    """A declaration failed a semantic check while being built."""


@dataclass
class Verdict:
    """Outcome of a check: ``ok`` plus a human-readable witness on failure."""

    ok: bool
    witness: str | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"FAILED: {self.witness}" if self.witness else "FAILED"
