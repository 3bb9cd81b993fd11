from src.experiments.orchestrator import (
    PassResult,
    approx_sweep,
    build_learner,
    run,
    run_pass,
    sweep_epsilon,
    tune,
)

__all__ = [
    "PassResult",
    "approx_sweep",
    "build_learner",
    "run",
    "run_pass",
    "sweep_epsilon",
    "tune",
]
