from src.enums.learner_enums import (
    ApproxMethod,
    EigSolver,
    EtaSchedule,
    KernelKind,
    LandmarkInit,
    LossKind,
    Method,
    StageOneMap,
    Task,
    UpdateKind,
)

__all__ = [
    "ApproxMethod",
    "EigSolver",
    "EtaSchedule",
    "KernelKind",
    "LandmarkInit",
    "LossKind",
    "Method",
    "StageOneMap",
    "Task",
    "UpdateKind",
]
