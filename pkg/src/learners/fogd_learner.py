"""
FOGD learner: random Fourier features of the Gaussian kernel with online
gradient descent, sized to the same budget as the Nyström learners.
"""

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.kernel_approximation import RBFSampler

from evaluator.budget import BudgetReport
from src.enums.learner_enums import Method
from src.exceptions import InvalidArgumentError
from src.learners.learner import Learner, StepResult
from src.learners.losses import loss_and_grad
from src.learners.model import OnlineModel, model_from_dict, model_to_dict, predict, sgd_step
from src.numerics.kernels import KernelConfig

logger = logging.getLogger(__name__)


def parity_dimension(m: int, r: int, d: int) -> int:
    """
    Number of Fourier features D = floor((m d + m r) / d) that stores as many
    frequencies as a Nyström learner stores landmarks and eigenvectors.
    """
    D = (m * d + m * r) // d
    if D < 1:
        raise InvalidArgumentError(f"budget parity gives D={D} for m={m}, r={r}, d={d}")
    return D


@dataclass(frozen=True)
class FourierFeatures:
    """
    Frequencies omega (D x d) and phases (D) of z(x) = sqrt(2/D) cos(omega x + phase).
    """

    omega: np.ndarray
    phase: np.ndarray
    seed: int

    @property
    def D(self) -> int:
        return self.phase.shape[0]

    @property
    def scale(self) -> float:
        return float(np.sqrt(2.0 / self.D))

    @classmethod
    def draw(cls, d: int, D: int, kernel: KernelConfig, seed: int) -> "FourierFeatures":
        """
        Draws frequencies from the kernel's spectral density, Normal(0, 2 gamma)
        per coordinate, and phases from Uniform[0, 2 pi).
        """
        sampler = RBFSampler(gamma=kernel.gamma, n_components=D, random_state=seed)
        sampler.fit(np.zeros((1, d)))
        return cls(
            omega=np.ascontiguousarray(sampler.random_weights_.T),
            phase=sampler.random_offset_.copy(),
            seed=seed,
        )

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.omega.shape[1]:
            raise InvalidArgumentError(
                f"expected {self.omega.shape[1]} features, got {X.shape[1]}"
            )
        return self.scale * np.cos(X @ self.omega.T + self.phase)


def rff_map(x: np.ndarray, ff: FourierFeatures) -> np.ndarray:
    """
    Random Fourier embedding of one sample (length D).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (ff.omega.shape[1],):
        raise InvalidArgumentError(
            f"expected a vector of length {ff.omega.shape[1]}, got {x.shape}"
        )
    return ff.scale * np.cos(ff.omega @ x + ff.phase)


class FogdLearner(Learner):
    """
    Online gradient descent over random Fourier features.
    """

    def __init__(self, features: FourierFeatures, model: OnlineModel):
        super().__init__(Method.FOGD)
        self.features = features
        self.model = model

    @classmethod
    def from_config(cls, config, warmup: np.ndarray) -> "FogdLearner":
        return fogd_learner(
            d=warmup.shape[1],
            m=config.m,
            r=config.rank,
            kernel=config.kernel,
            seed=config.seed,
            **config.model_hyperparams(),
        )

    def process(self, x: np.ndarray, y: float) -> StepResult:
        self.model = self.model.tick()
        z = rff_map(x, self.features)
        prediction = predict(self.model, z)
        loss_value, _ = loss_and_grad(self.model.loss, y, prediction)
        self.model = sgd_step(self.model, z, y)
        self.stats.steps += 1
        return StepResult(prediction=prediction, loss=loss_value)

    def budget_report(self) -> BudgetReport:
        return BudgetReport(
            method=self.name,
            components={
                "frequencies": self.features.omega.size,
                "phases": self.features.phase.size,
                "weights": self.model.w.size,
            },
        )

    def to_checkpoint(self) -> dict:
        return {
            "method": self.name,
            "omega": self.features.omega,
            "phase": self.features.phase,
            "seed": self.features.seed,
            "model": model_to_dict(self.model),
        }

    @classmethod
    def from_checkpoint(cls, document: dict) -> "FogdLearner":
        features = FourierFeatures(
            omega=np.asarray(document["omega"], dtype=np.float64),
            phase=np.asarray(document["phase"], dtype=np.float64),
            seed=int(document["seed"]),
        )
        return cls(features, model_from_dict(document["model"]))


def fogd_learner(
    d: int, m: int, r: int, kernel: KernelConfig, seed: int, eta: float, **hyperparams
) -> FogdLearner:
    """
    Builds a FOGD learner at budget parity with an (m, r) Nyström learner.
    """
    D = parity_dimension(m, r, d)
    logger.info("FOGD uses D=%d Fourier features for m=%d, r=%d, d=%d", D, m, r, d)
    features = FourierFeatures.draw(d, D, kernel, seed)
    return FogdLearner(features, OnlineModel.zeros(D, eta=eta, **hyperparams))
