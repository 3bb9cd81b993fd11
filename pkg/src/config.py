"""
Configuration: environment settings and the validated run configuration.
"""

import math
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.data_io.stream import StreamSpec
from src.enums.learner_enums import (
    EigSolver,
    EtaSchedule,
    LandmarkInit,
    LossKind,
    Method,
    StageOneMap,
    Task,
)
from src.numerics.kernels import KernelConfig

load_dotenv()


class NystromSettings(BaseSettings):
    """
    Environment settings, read from ONLINE_NYSTROM_* variables or .env.
    """

    model_config = SettingsConfigDict(env_prefix="ONLINE_NYSTROM_", extra="ignore")

    data_dir: Path = Path("data")
    output_dir: Path = Path("runs")
    log_level: str = "INFO"
    n_jobs: int = 1


@lru_cache(maxsize=1)
def get_settings() -> NystromSettings:
    return NystromSettings()


class RunConfig(BaseModel):
    """
    Everything one experiment needs. Validated before any data is read.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    method: Method = Method.NOLANA
    loss: LossKind = LossKind.HINGE
    data: StreamSpec
    m: int = Field(default=100, ge=1)
    r: int | None = Field(default=None, ge=1)
    r_ratio: float = Field(default=0.8, gt=0, le=1)
    epsilon: float = Field(default=0.0, ge=0)
    eta: float = Field(default=0.1, ge=0)
    lam: float = Field(default=0.0, ge=0, alias="lambda")
    theta: float = Field(default=1e-3, gt=0)
    gamma: float = Field(default=1.0, gt=0)
    p: int = Field(default=3, ge=1)
    seed: int = 0
    shuffles: int = Field(default=5, ge=1)
    output_dir: Path = Path("runs")

    eta_schedule: EtaSchedule = EtaSchedule.CONSTANT
    stage_one_steps: int = Field(default=1, ge=1)
    stage_one_map: StageOneMap = StageOneMap.PRE
    realign: bool = True
    eig_solver: EigSolver = EigSolver.WARMSTART
    rel_tol: float = Field(default=1e-6, gt=0, lt=1)
    landmark_init: LandmarkInit = LandmarkInit.FIRST
    warmup_size: int | None = Field(default=None, ge=1)
    scale: bool = False
    aggressiveness: float = Field(default=math.inf, gt=0)
    eps_insensitive: float = Field(default=0.0, ge=0)
    timing: bool = False
    progress: bool = False
    audit: bool = False
    n_jobs: int = 1
    checkpoint_every: int | None = Field(default=None, ge=1)
    max_samples: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_consistency(self):
        if self.rank > self.m:
            raise ValueError(f"r={self.rank} exceeds m={self.m}")
        if self.warmup_size is not None and self.warmup_size < self.m:
            raise ValueError(f"warmup_size={self.warmup_size} is smaller than m={self.m}")
        if self.max_samples is not None and self.max_samples < self.warmup_buffer:
            raise ValueError(
                f"max_samples={self.max_samples} cannot fill a warm-up of {self.warmup_buffer}"
            )
        regression = self.data.task is Task.REGRESSION
        if regression != (self.loss is LossKind.SQUARED):
            raise ValueError(
                f"loss {self.loss.value} does not fit a {self.data.task.value} task"
            )
        return self

    @field_serializer("epsilon", "aggressiveness")
    def _serialize_unbounded(self, value: float):
        return "inf" if math.isinf(value) else value

    @property
    def rank(self) -> int:
        if self.r is not None:
            return self.r
        return max(1, round(self.r_ratio * self.m))

    @property
    def warmup_buffer(self) -> int:
        return self.warmup_size or self.m

    @property
    def kernel(self) -> KernelConfig:
        return KernelConfig(gamma=self.gamma)

    def model_hyperparams(self) -> dict:
        return {
            "eta": self.eta,
            "lam": self.lam,
            "theta": self.theta,
            "loss": self.loss,
            "eta_schedule": self.eta_schedule,
        }
