"""
Enum definitions for the online learning toolkit.
"""

from enum import Enum


class Method(Enum):
    """
    Enum for the online learning methods exposed by the CLI.
    """

    PA = "pa"
    FOGD = "fogd"
    NOGD = "nogd"
    NOLANA = "nolana"


class LossKind(Enum):
    """
    Enum for the per-sample loss a model is trained with.
    """

    HINGE = "hinge"
    LOGISTIC = "logistic"
    SQUARED = "squared"

    @property
    def is_classification(self) -> bool:
        return self is not LossKind.SQUARED


class Task(Enum):
    """
    Enum for the kind of label a stream carries.
    """

    CLASSIFICATION = "classification"
    REGRESSION = "regression"


class KernelKind(Enum):
    """
    Enum for the base kernels. Only the Gaussian kernel is implemented.
    """

    GAUSSIAN = "gaussian"


class UpdateKind(Enum):
    """
    Enum for the result of offering a sample to the landmark state.
    """

    UNCHANGED = "unchanged"
    UPDATED = "updated"


class EigSolver(Enum):
    """
    Enum for how the landmark eigendecomposition is refreshed after an update.
    """

    WARMSTART = "warmstart"
    EXACT = "exact"


class StageOneMap(Enum):
    """
    Enum for which feature map embeds the current sample in the first
    stage of the two-stage model update.
    """

    POST = "post"
    PRE = "pre"


class EtaSchedule(Enum):
    """
    Enum for learning rate schedules.
    """

    CONSTANT = "constant"
    INV_SQRT = "inv_sqrt"


class LandmarkInit(Enum):
    """
    Enum for how initial landmarks are drawn from the warm-up buffer.
    """

    FIRST = "first"
    SAMPLED = "sampled"


class ApproxMethod(Enum):
    """
    Enum for the feature maps compared in the kernel approximation experiment.
    """

    OANA = "oana"
    NOGD = "nogd"
    FOGD = "fogd"
