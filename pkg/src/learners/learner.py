"""
Learner class for all streaming learners.
"""

import logging
from dataclasses import dataclass

import numpy as np

from evaluator.budget import BudgetReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepResult:
    """
    Outcome of one test-then-train step.
    """

    prediction: float
    loss: float
    updated: bool = False


@dataclass
class LearnerStats:
    """
    Counters kept over a pass.
    """

    steps: int = 0
    updates: int = 0
    skipped: int = 0
    refresh_seconds: float = 0.0


class Learner:
    """
    Base class for all streaming learners.

    Subclasses predict on a sample, report the prequential loss, then learn
    from its label.
    """

    def __init__(self, name):
        # Handle both string and Method enum
        if hasattr(name, "value"):
            self.name = name.value
        else:
            self.name = name
        self.stats = LearnerStats()
        logger.info("%s is initializing", self.name)

    def process(self, x: np.ndarray, y: float) -> StepResult:
        """
        Predicts on x, then updates on (x, y).
        """
        raise NotImplementedError

    def budget_report(self) -> BudgetReport:
        """
        Returns the stored-real counts of the current state.
        """
        raise NotImplementedError

    def to_checkpoint(self) -> dict:
        """
        Returns a JSON-ready document that restores this learner.
        """
        raise NotImplementedError

    @classmethod
    def from_checkpoint(cls, document: dict) -> "Learner":
        raise NotImplementedError
