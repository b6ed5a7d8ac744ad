"""Exception types raised by the library."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .series_engine import EvalReport


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class UnderflowError(ArithmeticError):
    """A recurrence seed is too small to be represented, so the recurrence cannot start."""


class NotConverged(ArithmeticError):
    """The series or root search hit its iteration budget.

    ``report`` holds the partial result (value, bound, iteration count) when
    the failure comes from a series evaluation.
    """

    def __init__(self, message: str, report: EvalReport | None = None):
        super().__init__(message)
        self.report = report
