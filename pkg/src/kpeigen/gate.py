"""Admissibility of a spectral index for a given potential height M."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .potential import StepPotential

__all__ = ["ConditionViolation", "ConditionReport", "check_condition", "smallest_admissible_n"]


class ConditionViolation(ValueError):
    """The potential is too strong for the requested index."""

    def __init__(self, report: "ConditionReport"):
        self.report = report
        super().__init__(report.diagnostic)


def _admissible(M: float, n: int) -> bool:
    if n == 1:
        return M <= 0.5
    return M < (2 * n - 1) / 2


def smallest_admissible_n(M: float) -> int:
    """Smallest n with M <= 1/2 (n = 1) or M < (2n - 1)/2."""
    if M <= 0.5:
        return 1
    n = max(2, math.floor(M + 0.5))
    while not _admissible(M, n):
        n += 1
    return n


@dataclass(frozen=True)
class ConditionReport:
    ok: bool
    n: int
    M: float
    smallest_n: int

    @property
    def diagnostic(self) -> str:
        if self.ok:
            return f"n={self.n} admissible for M={self.M:g}"
        need = "M <= 1/2" if self.n == 1 else f"M < {(2 * self.n - 1) / 2:g}"
        return (
            f"index n={self.n} not admissible for M={self.M:g} (need {need}); "
            f"smallest admissible n = {self.smallest_n}"
        )

    def __bool__(self):
        return self.ok


def check_condition(q: StepPotential | float, n: int) -> ConditionReport:
    """Gate an index n against the potential height M = max |q|."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    M = q if isinstance(q, (int, float)) else q.M
    return ConditionReport(_admissible(M, n), n, float(M), smallest_admissible_n(M))


def require_condition(q: StepPotential, n: int) -> ConditionReport:
    report = check_condition(q, n)
    if not report.ok:
        raise ConditionViolation(report)
    return report
