"""
The linear model over the embedded space and its updates: prediction, the
regularized SGD step and the ridge realignment after a feature map change.
"""

from dataclasses import dataclass, replace

import numpy as np

from src.enums.learner_enums import EtaSchedule, LossKind
from src.exceptions import InvalidArgumentError
from src.learners.losses import loss_and_grad
from src.numerics.linalg import solve_ridge


@dataclass(frozen=True)
class OnlineModel:
    """
    Weights over the embedded space plus the update hyperparameters.

    t counts the stream points seen; it drives the inv_sqrt schedule only.
    """

    w: np.ndarray
    eta: float
    lam: float = 0.0
    theta: float = 1e-3
    loss: LossKind = LossKind.HINGE
    eta_schedule: EtaSchedule = EtaSchedule.CONSTANT
    t: int = 0

    def __post_init__(self):
        for name in ("eta", "lam", "theta"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidArgumentError(f"{name} must be finite and >= 0, got {value}")
        # clipped eigenvalues leave zero columns in the realignment design
        if self.theta <= 0:
            raise InvalidArgumentError(f"theta must be > 0, got {self.theta}")

    @classmethod
    def zeros(cls, dim: int, **hyperparams) -> "OnlineModel":
        return cls(w=np.zeros(dim), **hyperparams)

    @property
    def learning_rate(self) -> float:
        if self.eta_schedule is EtaSchedule.INV_SQRT:
            return self.eta / np.sqrt(max(self.t, 1))
        return self.eta

    def tick(self) -> "OnlineModel":
        return replace(self, t=self.t + 1)


def predict(model: OnlineModel, phi: np.ndarray) -> float:
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != model.w.shape:
        raise InvalidArgumentError(
            f"feature length {phi.shape} does not match model length {model.w.shape}"
        )
    return float(np.dot(model.w, phi))


def sgd_step(model: OnlineModel, phi: np.ndarray, y: float) -> OnlineModel:
    """
    One step on lambda/2 ||w||^2 + loss(y, w . phi): shrink, then move
    against the loss gradient.
    """
    score = predict(model, phi)
    _, dscore = loss_and_grad(model.loss, y, score)
    eta = model.learning_rate
    w = (1.0 - eta * model.lam) * model.w - (eta * dscore) * np.asarray(phi)
    return replace(model, w=w)


def realign_model(model: OnlineModel, old_map, new_map, landmarks: np.ndarray) -> OnlineModel:
    """
    Transfers the model to a new feature map by matching its predictions on
    the landmark points.

    Solves min_wbar sum_i (w . old_map(u_i) - wbar . new_map(u_i))^2
    + theta ||wbar||^2 over the new landmarks u_i.

    Args:
        model: Model fitted under old_map.
        old_map: Feature map in force before the landmark update.
        new_map: Feature map after the update.
        landmarks: The updated landmark points, shape (m, d).

    Returns:
        OnlineModel: Model with the realigned weights.
    """
    targets = old_map.transform(landmarks) @ model.w
    design = new_map.transform(landmarks)
    return replace(model, w=solve_ridge(design, targets, model.theta))


def alignment_objective(
    w_bar: np.ndarray, model: OnlineModel, old_map, new_map, landmarks: np.ndarray
) -> float:
    """
    Value of the realignment objective at w_bar.
    """
    residual = old_map.transform(landmarks) @ model.w - new_map.transform(landmarks) @ w_bar
    return float(residual @ residual + model.theta * (w_bar @ w_bar))


def model_to_dict(model: OnlineModel) -> dict:
    return {
        "w": model.w,
        "eta": model.eta,
        "lam": model.lam,
        "theta": model.theta,
        "loss": model.loss.value,
        "eta_schedule": model.eta_schedule.value,
        "t": model.t,
    }


def model_from_dict(document: dict) -> OnlineModel:
    return OnlineModel(
        w=np.asarray(document["w"], dtype=np.float64),
        eta=float(document["eta"]),
        lam=float(document["lam"]),
        theta=float(document["theta"]),
        loss=LossKind(document["loss"]),
        eta_schedule=EtaSchedule(document["eta_schedule"]),
        t=int(document["t"]),
    )
