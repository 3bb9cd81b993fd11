"""
NOLANA learner: Nyström features over adaptive landmarks, SGD on the model,
and a two-stage model correction whenever the landmarks move.
"""

import logging

import numpy as np

from evaluator.budget import BudgetReport
from src.enums.learner_enums import EigSolver, LandmarkInit, Method, StageOneMap
from src.learners.learner import Learner, StepResult
from src.learners.losses import loss_and_grad
from src.learners.model import (
    OnlineModel,
    model_from_dict,
    model_to_dict,
    predict,
    realign_model,
    sgd_step,
)
from src.oana.landmarks import (
    LandmarkState,
    UpdateOutcome,
    feature_map,
    init_landmarks,
    maybe_update_landmarks,
    state_from_dict,
    state_to_dict,
)

logger = logging.getLogger(__name__)


def process_point(
    state: LandmarkState,
    model: OnlineModel,
    x: np.ndarray,
    y: float,
    stage_one_steps: int = 1,
    stage_one_map: StageOneMap = StageOneMap.PRE,
    realign: bool = True,
) -> tuple[float, float, UpdateOutcome, OnlineModel]:
    """
    One test-then-train step.

    Predicts with the current map, offers x to the landmarks, then either
    takes a plain SGD step (map unchanged) or fits x with gradient steps and
    realigns the model to the new map (map changed). By default the fit
    embeds x with the pre-update map, so the weights handed to realignment
    are old-map weights.

    Args:
        state: Landmark state, mutated when the landmarks move.
        model: Current model.
        x: Sample of length d.
        y: Label.
        stage_one_steps: Gradient steps on x after a map change.
        stage_one_map: Embed x with the pre-update (default) or post-update map there.
        realign: Run the ridge realignment after a map change.

    Returns:
        tuple: (prediction, prequential loss, landmark outcome, new model)
    """
    phi = feature_map(x, state)
    prediction = predict(model, phi)
    loss_value, _ = loss_and_grad(model.loss, y, prediction)

    old_map = state.nystrom_map()
    outcome = maybe_update_landmarks(x, state)
    if not outcome.updated:
        return prediction, loss_value, outcome, sgd_step(model, phi, y)

    new_map = state.nystrom_map()
    phi_fit = new_map(x) if stage_one_map is StageOneMap.POST else phi
    for _ in range(stage_one_steps):
        model = sgd_step(model, phi_fit, y)
    if realign:
        model = realign_model(model, old_map, new_map, state.landmarks)
    return prediction, loss_value, outcome, model


class NolanaLearner(Learner):
    """
    Streaming learner over an adaptive landmark state.
    """

    def __init__(
        self,
        state: LandmarkState,
        model: OnlineModel,
        stage_one_steps: int = 1,
        stage_one_map: StageOneMap = StageOneMap.PRE,
        realign: bool = True,
        timing: bool = False,
        name=Method.NOLANA,
    ):
        super().__init__(name)
        self.state = state
        self.model = model
        self.stage_one_steps = stage_one_steps
        self.stage_one_map = stage_one_map
        self.realign = realign
        self.timing = timing

    @classmethod
    def from_config(cls, config, warmup: np.ndarray) -> "NolanaLearner":
        return nolana_learner(
            warmup,
            m=config.m,
            r=config.rank,
            epsilon=config.epsilon,
            kernel=config.kernel,
            power_iters=config.p,
            rel_tol=config.rel_tol,
            eig_solver=config.eig_solver,
            landmark_init=config.landmark_init,
            seed=config.seed,
            stage_one_steps=config.stage_one_steps,
            stage_one_map=config.stage_one_map,
            realign=config.realign,
            timing=config.timing,
            **config.model_hyperparams(),
        )

    def process(self, x: np.ndarray, y: float) -> StepResult:
        prediction, loss_value, outcome, self.model = process_point(
            self.state,
            self.model.tick(),
            x,
            y,
            stage_one_steps=self.stage_one_steps,
            stage_one_map=self.stage_one_map,
            realign=self.realign,
        )
        self.stats.steps += 1
        if outcome.updated:
            self.stats.updates += 1
            if self.timing:
                self.stats.refresh_seconds += outcome.refresh_seconds
        return StepResult(prediction=prediction, loss=loss_value, updated=outcome.updated)

    def budget_report(self) -> BudgetReport:
        return BudgetReport(
            method=self.name,
            components={
                "landmarks": self.state.landmarks.size,
                "eigenvectors": self.state.eig.vectors.size,
                "eigenvalues": self.state.eig.values.size,
                "counts": self.state.counts.size,
                "weights": self.model.w.size,
            },
        )

    def to_checkpoint(self) -> dict:
        return {
            "method": self.name,
            "state": state_to_dict(self.state),
            "model": model_to_dict(self.model),
            "stage_one_steps": self.stage_one_steps,
            "stage_one_map": self.stage_one_map.value,
            "realign": self.realign,
            "updates": self.stats.updates,
        }

    @classmethod
    def from_checkpoint(cls, document: dict) -> "NolanaLearner":
        learner = cls(
            state=state_from_dict(document["state"]),
            model=model_from_dict(document["model"]),
            stage_one_steps=int(document["stage_one_steps"]),
            stage_one_map=StageOneMap(document["stage_one_map"]),
            realign=bool(document["realign"]),
        )
        learner.stats.updates = int(document.get("updates", 0))
        return learner


def nolana_learner(
    warmup: np.ndarray,
    m: int,
    r: int,
    epsilon: float,
    kernel,
    eta: float,
    stage_one_steps: int = 1,
    stage_one_map: StageOneMap = StageOneMap.PRE,
    realign: bool = True,
    timing: bool = False,
    power_iters: int = 3,
    rel_tol: float = 1e-6,
    eig_solver: EigSolver = EigSolver.WARMSTART,
    landmark_init: LandmarkInit = LandmarkInit.FIRST,
    seed: int | None = None,
    **hyperparams,
) -> NolanaLearner:
    """
    Builds a NOLANA learner with landmarks taken from the warm-up buffer and
    a zero model.
    """
    state = init_landmarks(
        warmup,
        m,
        r,
        epsilon,
        kernel,
        power_iters=power_iters,
        rel_tol=rel_tol,
        eig_solver=eig_solver,
        landmark_init=landmark_init,
        seed=seed,
    )
    model = OnlineModel.zeros(state.r, eta=eta, **hyperparams)
    return NolanaLearner(
        state,
        model,
        stage_one_steps=stage_one_steps,
        stage_one_map=stage_one_map,
        realign=realign,
        timing=timing,
    )
