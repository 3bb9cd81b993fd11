"""
Empirical regret against the best fixed model on the final feature map.
"""

import logging

import numpy as np

from src.enums.learner_enums import LossKind
from src.exceptions import InvalidArgumentError, UnsupportedDiagnosticError
from src.numerics.linalg import solve_ridge

logger = logging.getLogger(__name__)

# the comparator materializes a T x r feature matrix
MAX_DIAGNOSTIC_STEPS = 20_000


def _check_inputs(online_losses, features, labels, loss):
    if loss is not LossKind.SQUARED:
        raise UnsupportedDiagnosticError(
            f"regret needs the closed-form squared-loss comparator, got {loss.value}"
        )
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.float64)
    online_losses = np.asarray(online_losses, dtype=np.float64)
    T = features.shape[0]
    if labels.shape != (T,) or online_losses.shape != (T,):
        raise InvalidArgumentError(
            f"{T} feature rows, {labels.shape[0]} labels and {online_losses.shape[0]} losses"
        )
    if T > MAX_DIAGNOSTIC_STEPS:
        raise UnsupportedDiagnosticError(
            f"regret diagnostic is limited to {MAX_DIAGNOSTIC_STEPS} steps, got {T}"
        )
    return online_losses, features, labels


def comparator_loss(features: np.ndarray, labels: np.ndarray, lam: float) -> float:
    """
    Total regularized loss of the best fixed model,
    min_w sum_t (y_t - w . phi_t)^2 + T lam / 2 ||w||^2.
    """
    T = features.shape[0]
    w_star = solve_ridge(features, labels, T * lam / 2.0)
    residual = labels - features @ w_star
    return float(residual @ residual + 0.5 * T * lam * (w_star @ w_star))


def regret_diagnostic(
    log,
    final_features: np.ndarray,
    labels: np.ndarray,
    lam: float,
    loss: LossKind = LossKind.SQUARED,
) -> float:
    """
    Cumulative online loss minus the comparator's total loss.

    Args:
        log: MetricsLog of the pass, or an array of per-step online losses.
        final_features: Rows phi(x_t) under the final feature map, shape (T, r).
        labels: Labels y_t.
        lam: Regularization strength of the per-step objective.
        loss: Loss of the pass; only squared loss is supported.

    Returns:
        float: The regret after T steps.
    """
    online = log.losses() if hasattr(log, "losses") else log
    online, features, labels = _check_inputs(online, final_features, labels, loss)
    return float(np.sum(online)) - comparator_loss(features, labels, lam)


def regret_curve(
    log,
    final_features: np.ndarray,
    labels: np.ndarray,
    lam: float,
    checkpoints,
    loss: LossKind = LossKind.SQUARED,
) -> list[tuple[int, float]]:
    """
    Regret over each stream prefix in checkpoints, for checking sublinear growth.
    """
    online = log.losses() if hasattr(log, "losses") else log
    online, features, labels = _check_inputs(online, final_features, labels, loss)
    curve = []
    for T in sorted(checkpoints):
        if not 1 <= T <= features.shape[0]:
            raise InvalidArgumentError(f"checkpoint {T} outside [1, {features.shape[0]}]")
        value = float(np.sum(online[:T])) - comparator_loss(features[:T], labels[:T], lam)
        curve.append((T, value))
        logger.debug("regret after %d steps: %.6g", T, value)
    return curve
