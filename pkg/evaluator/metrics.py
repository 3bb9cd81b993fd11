"""
Prequential metrics: per-step records, streaming accumulators and the
per-pass CSV and summary.
"""

import csv
import logging
import math
from dataclasses import astuple, dataclass
from pathlib import Path

import numpy as np

from src.enums.learner_enums import Task
from src.learners.losses import decision

logger = logging.getLogger(__name__)

CSV_HEADER = ("step", "prediction", "label", "loss", "cum_metric", "updated", "elapsed_ns")


@dataclass(frozen=True)
class StepRecord:
    step: int
    prediction: float
    label: float
    loss: float
    cum_metric: float
    updated: bool
    elapsed_ns: int = 0


class MetricsLog:
    """
    Test-then-train log of one pass.

    Classification tracks cumulative accuracy (a fraction), regression the
    running RMSE. Both are kept as streaming accumulators and can be
    recomputed from the raw records.
    """

    def __init__(self, task: Task, timing: bool = False):
        self.task = task
        self.timing = timing
        self.records: list[StepRecord] = []
        self.correct = 0
        self.squared_error = 0.0
        self.cumulative_loss = 0.0
        self.updates = 0
        self.elapsed_ns = 0

    def __len__(self) -> int:
        return len(self.records)

    @property
    def metric_name(self) -> str:
        return "accuracy" if self.task is Task.CLASSIFICATION else "rmse"

    def _current(self) -> float:
        n = len(self.records)
        if n == 0:
            return math.nan
        if self.task is Task.CLASSIFICATION:
            return self.correct / n
        return math.sqrt(self.squared_error / n)

    def record(
        self, prediction: float, label: float, loss: float, updated: bool, elapsed_ns: int = 0
    ) -> StepRecord:
        if self.task is Task.CLASSIFICATION:
            self.correct += int(decision(prediction) == label)
        else:
            self.squared_error += (label - prediction) ** 2
        self.cumulative_loss += loss
        self.updates += int(updated)
        elapsed_ns = elapsed_ns if self.timing else 0
        self.elapsed_ns += elapsed_ns

        # cum_metric is computed after appending the step
        n = len(self.records) + 1
        if self.task is Task.CLASSIFICATION:
            cum = self.correct / n
        else:
            cum = math.sqrt(self.squared_error / n)
        entry = StepRecord(
            step=n,
            prediction=float(prediction),
            label=float(label),
            loss=float(loss),
            cum_metric=cum,
            updated=bool(updated),
            elapsed_ns=int(elapsed_ns),
        )
        self.records.append(entry)
        return entry

    @property
    def final_metric(self) -> float:
        return self._current()

    def recompute_metric(self) -> float:
        """
        Final metric from the raw records, without the accumulators.
        """
        if not self.records:
            return math.nan
        predictions = np.array([r.prediction for r in self.records])
        labels = np.array([r.label for r in self.records])
        if self.task is Task.CLASSIFICATION:
            decided = np.where(predictions >= 0, 1.0, -1.0)
            return float(np.mean(decided == labels))
        return float(np.sqrt(np.mean((labels - predictions) ** 2)))

    def losses(self) -> np.ndarray:
        return np.array([r.loss for r in self.records])

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for entry in self.records:
                step, prediction, label, loss, cum, updated, elapsed = astuple(entry)
                writer.writerow(
                    [step, repr(prediction), repr(label), repr(loss), repr(cum), int(updated), elapsed]
                )

    def summary(self) -> dict:
        final = self.final_metric
        result = {
            "steps": len(self.records),
            "metric": self.metric_name,
            "final_metric": final,
            "cumulative_loss": self.cumulative_loss,
            "updates": self.updates,
        }
        if self.task is Task.CLASSIFICATION:
            result["accuracy_percent"] = 100.0 * final
        if self.timing:
            result["wall_seconds"] = self.elapsed_ns / 1e9
        return result

    def accumulators(self) -> dict:
        """
        Checkpoint form: the raw records plus the running sums.
        """
        return {
            "task": self.task.value,
            "timing": self.timing,
            "records": [list(astuple(entry)) for entry in self.records],
            "correct": self.correct,
            "squared_error": self.squared_error,
            "cumulative_loss": self.cumulative_loss,
            "updates": self.updates,
            "elapsed_ns": self.elapsed_ns,
        }

    @classmethod
    def from_accumulators(cls, document: dict) -> "MetricsLog":
        log = cls(Task(document["task"]), timing=bool(document["timing"]))
        log.records = [
            StepRecord(
                step=int(step),
                prediction=float(prediction),
                label=float(label),
                loss=float(loss),
                cum_metric=float(cum),
                updated=bool(updated),
                elapsed_ns=int(elapsed),
            )
            for step, prediction, label, loss, cum, updated, elapsed in document["records"]
        ]
        log.correct = int(document["correct"])
        log.squared_error = float(document["squared_error"])
        log.cumulative_loss = float(document["cumulative_loss"])
        log.updates = int(document["updates"])
        log.elapsed_ns = int(document["elapsed_ns"])
        return log
