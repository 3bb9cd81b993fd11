"""
Kernel functions used to build Nyström and Fourier feature maps.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from src.enums.learner_enums import KernelKind
from src.exceptions import InvalidArgumentError


@dataclass(frozen=True)
class KernelConfig:
    """
    Gaussian kernel k(x, z) = exp(-gamma * ||x - z||^2).
    """

    gamma: float
    kind: KernelKind = KernelKind.GAUSSIAN

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise InvalidArgumentError(f"gamma must be positive, got {self.gamma}")
        if self.kind is not KernelKind.GAUSSIAN:
            raise InvalidArgumentError(f"unsupported kernel {self.kind}")


def gaussian_kernel(x: np.ndarray, z: np.ndarray, cfg: KernelConfig) -> float:
    """
    Evaluates the kernel between two vectors.

    Args:
        x: First vector of length d.
        z: Second vector of length d.
        cfg: Kernel configuration.

    Returns:
        float: Kernel value in (0, 1].
    """
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape or x.ndim != 1:
        raise InvalidArgumentError(
            f"kernel arguments must be vectors of equal length, got {x.shape} and {z.shape}"
        )
    diff = x - z
    return float(np.exp(-cfg.gamma * np.dot(diff, diff)))


def kernel_cross(A: np.ndarray, B: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    """
    Evaluates the kernel between every row of A and every row of B.

    Args:
        A: Matrix of shape (n, d).
        B: Matrix of shape (m, d).
        cfg: Kernel configuration.

    Returns:
        np.ndarray: Matrix of shape (n, m) with entry (i, j) = k(A[i], B[j]).
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise InvalidArgumentError(
            f"column counts differ: {A.shape[1]} vs {B.shape[1]}"
        )
    # cdist subtracts coordinate-wise, so k(a, a) is exactly 1 and the result
    # is the exact transpose of kernel_cross(B, A)
    sq_dist = cdist(A, B, metric="sqeuclidean")
    return np.exp(-cfg.gamma * sq_dist)
