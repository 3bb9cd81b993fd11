from src.learners.checkpoint import learners, load_checkpoint, save_checkpoint
from src.learners.fogd_learner import (
    FogdLearner,
    FourierFeatures,
    fogd_learner,
    parity_dimension,
    rff_map,
)
from src.learners.learner import Learner, LearnerStats, StepResult
from src.learners.losses import decision, loss_and_grad
from src.learners.model import OnlineModel, predict, realign_model, sgd_step
from src.learners.nogd_learner import NogdLearner, nogd_learner
from src.learners.nolana_learner import NolanaLearner, nolana_learner, process_point
from src.learners.pa_learner import PALearner, PAModel, pa_step

__all__ = [
    "learners",
    "load_checkpoint",
    "save_checkpoint",
    "FogdLearner",
    "FourierFeatures",
    "fogd_learner",
    "parity_dimension",
    "rff_map",
    "Learner",
    "LearnerStats",
    "StepResult",
    "decision",
    "loss_and_grad",
    "OnlineModel",
    "predict",
    "realign_model",
    "sgd_step",
    "NogdLearner",
    "nogd_learner",
    "NolanaLearner",
    "nolana_learner",
    "process_point",
    "PALearner",
    "PAModel",
    "pa_step",
]
