"""
Passive-Aggressive learner: a linear model in the input space, PA-I updates
for classification and epsilon-insensitive PA-I for regression.
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from evaluator.budget import BudgetReport
from src.enums.learner_enums import LossKind, Method, Task
from src.learners.learner import Learner, StepResult
from src.learners.losses import loss_and_grad

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PAModel:
    """
    Weights in the input space and the PA step parameters.
    """

    w: np.ndarray
    aggressiveness: float = math.inf
    task: Task = Task.CLASSIFICATION
    eps_insensitive: float = 0.0


def pa_loss(model: PAModel, y: float, prediction: float) -> float:
    if model.task is Task.CLASSIFICATION:
        return max(0.0, 1.0 - y * prediction)
    return max(0.0, abs(y - prediction) - model.eps_insensitive)


def pa_step(model: PAModel, x: np.ndarray, y: float) -> tuple[float, PAModel]:
    """
    Predicts on x, then moves w just far enough to fit (x, y), capped by the
    aggressiveness.

    Returns:
        tuple: (prediction made before the update, updated model)
    """
    x = np.asarray(x, dtype=np.float64)
    prediction = float(np.dot(model.w, x))
    loss = pa_loss(model, y, prediction)
    if loss == 0.0:
        return prediction, model
    norm_sq = float(np.dot(x, x))
    if norm_sq == 0.0:
        logger.debug("skipping PA update on an all-zero sample with loss %.4g", loss)
        return prediction, model

    tau = min(model.aggressiveness, loss / norm_sq)
    if model.task is Task.CLASSIFICATION:
        w = model.w + (tau * y) * x
    else:
        w = model.w + (np.sign(y - prediction) * tau) * x
    return prediction, replace(model, w=w)


class PALearner(Learner):
    """
    Streaming wrapper around pa_step. The reported loss is the configured
    loss at the prediction, as for the kernel learners.
    """

    def __init__(self, model: PAModel, loss: LossKind):
        super().__init__(Method.PA)
        self.model = model
        self.loss = loss

    @classmethod
    def from_config(cls, config, warmup: np.ndarray) -> "PALearner":
        model = PAModel(
            w=np.zeros(warmup.shape[1]),
            aggressiveness=config.aggressiveness,
            task=config.data.task,
            eps_insensitive=config.eps_insensitive,
        )
        return cls(model, config.loss)

    def process(self, x: np.ndarray, y: float) -> StepResult:
        if not np.any(x) and pa_loss(self.model, y, 0.0) > 0:
            self.stats.skipped += 1
        prediction, self.model = pa_step(self.model, x, y)
        loss_value, _ = loss_and_grad(self.loss, y, prediction)
        self.stats.steps += 1
        return StepResult(prediction=prediction, loss=loss_value)

    def budget_report(self) -> BudgetReport:
        return BudgetReport(method=self.name, components={"weights": self.model.w.size})

    def to_checkpoint(self) -> dict:
        return {
            "method": self.name,
            "w": self.model.w,
            # JSON has no infinity
            "aggressiveness": (
                "inf" if math.isinf(self.model.aggressiveness) else self.model.aggressiveness
            ),
            "task": self.model.task.value,
            "eps_insensitive": self.model.eps_insensitive,
            "loss": self.loss.value,
        }

    @classmethod
    def from_checkpoint(cls, document: dict) -> "PALearner":
        model = PAModel(
            w=np.asarray(document["w"], dtype=np.float64),
            aggressiveness=float(document["aggressiveness"]),
            task=Task(document["task"]),
            eps_insensitive=float(document["eps_insensitive"]),
        )
        return cls(model, LossKind(document["loss"]))
