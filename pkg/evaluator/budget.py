"""
Budget accounting: how many reals a learner keeps, counted from live state.
"""

import logging
from dataclasses import dataclass, field

from src.exceptions import BudgetViolationError

logger = logging.getLogger(__name__)

# kept by every learner and not charged against the kernel budget
UNCHARGED_COMPONENTS = ("weights",)


@dataclass(frozen=True)
class BudgetReport:
    """
    Stored-real counts per component of one learner.
    """

    method: str
    components: dict[str, int] = field(default_factory=dict)

    @property
    def budget(self) -> int:
        return sum(
            count
            for name, count in self.components.items()
            if name not in UNCHARGED_COMPONENTS
        )

    @property
    def total(self) -> int:
        return sum(self.components.values())

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "components": dict(self.components),
            "budget": self.budget,
            "total": self.total,
        }


def parity_gap(first: BudgetReport, second: BudgetReport) -> float:
    """
    Relative difference of two charged budgets, |a - b| / max(a, b).
    """
    larger = max(first.budget, second.budget)
    if larger == 0:
        return 0.0
    return abs(first.budget - second.budget) / larger


class BudgetAudit:
    """
    Checks that a learner's stored-real counts stay at their initial values
    for the whole pass.
    """

    def __init__(self, initial: BudgetReport):
        self.initial = initial
        self.checks = 0

    def check(self, report: BudgetReport, step: int) -> None:
        self.checks += 1
        if report.components != self.initial.components:
            logger.error(
                "%s budget changed at step %d: %s -> %s",
                report.method,
                step,
                self.initial.components,
                report.components,
            )
            raise BudgetViolationError(
                f"{report.method} budget changed at step {step}: "
                f"{self.initial.components} -> {report.components}"
            )
