"""
NOGD learner: Nyström features over the first m stream points, never updated.
"""

import math

import numpy as np

from src.enums.learner_enums import LandmarkInit, Method
from src.exceptions import InvalidArgumentError
from src.learners.model import OnlineModel, model_from_dict
from src.learners.nolana_learner import NolanaLearner, nolana_learner
from src.oana.landmarks import LandmarkState, state_from_dict


class NogdLearner(NolanaLearner):
    """
    NOLANA with the landmark gate closed (epsilon = inf).

    Running through the same step code keeps the two trajectories
    identical for identical warm-up landmarks and step sizes.
    """

    def __init__(self, state: LandmarkState, model: OnlineModel, timing: bool = False):
        if not math.isinf(state.epsilon):
            raise InvalidArgumentError("NOGD needs a landmark state with epsilon = inf")
        super().__init__(state, model, timing=timing, name=Method.NOGD)

    @classmethod
    def from_config(cls, config, warmup: np.ndarray) -> "NogdLearner":
        return nogd_learner(
            warmup,
            m=config.m,
            r=config.rank,
            kernel=config.kernel,
            rel_tol=config.rel_tol,
            landmark_init=config.landmark_init,
            seed=config.seed,
            timing=config.timing,
            **config.model_hyperparams(),
        )

    @classmethod
    def from_checkpoint(cls, document: dict) -> "NogdLearner":
        learner = cls(
            state=state_from_dict(document["state"]),
            model=model_from_dict(document["model"]),
        )
        return learner


def nogd_learner(
    warmup: np.ndarray,
    m: int,
    r: int,
    kernel,
    eta: float,
    rel_tol: float = 1e-6,
    landmark_init: LandmarkInit = LandmarkInit.FIRST,
    seed: int | None = None,
    timing: bool = False,
    **hyperparams,
) -> NogdLearner:
    """
    Builds a NOGD learner whose landmarks are fixed to the warm-up points.
    """
    learner = nolana_learner(
        warmup,
        m=m,
        r=r,
        epsilon=math.inf,
        kernel=kernel,
        eta=eta,
        rel_tol=rel_tol,
        landmark_init=landmark_init,
        seed=seed,
        **hyperparams,
    )
    return NogdLearner(learner.state, learner.model, timing=timing)
