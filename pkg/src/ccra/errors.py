"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) so the CLI can report
it in JSON and tests can match on it.
"""

from __future__ import annotations

from dataclasses import dataclass


class CCRAError(Exception):
    """Base class for all errors raised by the package."""

    @property
    def code(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


class InvalidInstance(CCRAError, ValueError):
    """Raised by validation; carries every violation found, not just the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.code}: {v.message}" for v in self.violations))

    @property
    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


class CycleDetected(CCRAError):
    pass


class EmptyInput(CCRAError, ValueError):
    pass


# -- redirection -------------------------------------------------------------

class RedirectionError(CCRAError):
    pass


class ArcNotFound(RedirectionError):
    pass


class DuplicateArcRedirect(RedirectionError):
    pass


class InvalidRedirection(RedirectionError):
    pass


class WouldCreateCycle(RedirectionError):
    pass


class WouldCreateParallelArc(RedirectionError):
    pass


class BudgetExceeded(RedirectionError):
    pass


# -- solvers -----------------------------------------------------------------

class SolverError(CCRAError):
    pass


class NotSingleDelegation(SolverError):
    pass


class NotSingleApproval(SolverError):
    pass


class NotActiveRoot(SolverError):
    pass


class NotSpecialSetting(SolverError):
    pass


class InvalidEpsilon(SolverError, ValueError):
    pass


class InstanceTooLarge(SolverError):
    pass


class GuessSpaceTooLarge(SolverError):
    pass


class VerificationFailed(SolverError):
    """A solver produced a redirection set that does not re-validate (a bug)."""


# -- reductions --------------------------------------------------------------

class ReductionError(CCRAError):
    pass


class NotCubic(ReductionError):
    pass


class BudgetTooSmall(ReductionError):
    pass


class EmptySet(ReductionError):
    pass


class NotACover(ReductionError):
    pass


class InvalidConfig(CCRAError, ValueError):
    pass
