"""
Per-sample losses and their derivatives with respect to the model score.
"""

import numpy as np
from scipy.special import expit

from src.enums.learner_enums import LossKind
from src.exceptions import InvalidArgumentError


def check_label(loss: LossKind, y: float) -> None:
    if loss.is_classification and y not in (-1.0, 1.0):
        raise InvalidArgumentError(f"{loss.value} loss needs a label in {{-1, +1}}, got {y}")


def loss_and_grad(loss: LossKind, y: float, score: float) -> tuple[float, float]:
    """
    Evaluates a loss and its derivative in the score.

    Args:
        loss: Loss kind.
        y: Label, in {-1, +1} for classification losses.
        score: Model output w . phi.

    Returns:
        tuple: (loss value, d loss / d score)
    """
    check_label(loss, y)
    if loss is LossKind.HINGE:
        slack = 1.0 - y * score
        if slack > 0:
            return float(slack), float(-y)
        # subgradient 0 at the kink
        return 0.0, 0.0
    if loss is LossKind.LOGISTIC:
        margin = y * score
        return float(np.logaddexp(0.0, -margin)), float(-y * expit(-margin))
    residual = y - score
    return float(residual * residual), float(-2.0 * residual)


def decision(score: float) -> float:
    """
    Class decision for a score; ties go to +1.
    """
    return 1.0 if score >= 0 else -1.0
