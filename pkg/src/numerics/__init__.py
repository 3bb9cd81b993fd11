from src.numerics.kernels import KernelConfig, gaussian_kernel, kernel_cross
from src.numerics.linalg import (
    EigPair,
    pinv_sqrt,
    solve_ridge,
    truncated_eig,
    warmstart_randomized_eig,
)

__all__ = [
    "EigPair",
    "KernelConfig",
    "gaussian_kernel",
    "kernel_cross",
    "pinv_sqrt",
    "solve_ridge",
    "truncated_eig",
    "warmstart_randomized_eig",
]
