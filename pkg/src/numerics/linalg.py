"""
Small dense linear algebra for the landmark kernel matrix: truncated
eigendecomposition, warm-started randomized refresh, pseudo-inverse square
roots and ridge least squares.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from sklearn.utils.extmath import svd_flip

from src.exceptions import (
    DegenerateSpectrumError,
    InvalidArgumentError,
    SingularSystemError,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10
DEFAULT_REL_TOL = 1e-6
DEFAULT_POWER_ITERS = 3


@dataclass(frozen=True)
class EigPair:
    """
    Rank-r eigendecomposition U_r S_r U_r^T of a symmetric PSD matrix.

    vectors has orthonormal columns (m x r); values are non-increasing and
    clipped at zero.
    """

    vectors: np.ndarray
    values: np.ndarray

    @property
    def rank(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def _canonical(vectors: np.ndarray, values: np.ndarray) -> EigPair:
    order = np.argsort(values, kind="stable")[::-1]
    values = np.clip(values[order], 0.0, None)
    vectors = vectors[:, order]
    # fix signs so the largest entry of every column is positive
    vectors, _ = svd_flip(vectors, vectors.T.copy(), u_based_decision=True)
    vectors = np.ascontiguousarray(vectors)
    vectors.setflags(write=False)
    values.setflags(write=False)
    return EigPair(vectors=vectors, values=values)


def truncated_eig(E: np.ndarray, r: int) -> EigPair:
    """
    Computes the best rank-r symmetric approximation of E from scratch.

    Args:
        E: Symmetric PSD matrix of shape (m, m).
        r: Number of leading eigenpairs to keep.

    Returns:
        EigPair: Leading eigenvectors and eigenvalues of E.
    """
    E = np.asarray(E, dtype=np.float64)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got {E.shape}")
    m = E.shape[0]
    if not 1 <= r <= m:
        raise InvalidArgumentError(f"rank {r} outside [1, {m}]")
    if not np.all(np.isfinite(E)):
        raise InvalidArgumentError("matrix has non-finite entries")
    if np.max(np.abs(E - E.T), initial=0.0) > SYMMETRY_TOL:
        raise InvalidArgumentError("matrix is not symmetric")

    values, vectors = linalg.eigh(E, subset_by_index=[m - r, m - 1])
    return _canonical(vectors, values)


def warmstart_randomized_eig(
    prev: EigPair, a: np.ndarray, b: np.ndarray, p: int, r: int
) -> EigPair:
    """
    Refreshes a rank-r eigendecomposition after the rank-2 change
    E_bar = U S U^T + a b^T + b a^T.

    Runs p power iterations Q <- E_bar Q started at Q = prev.vectors, with a QR
    re-orthonormalization after every multiply, then a Rayleigh-Ritz
    projection. E_bar is only ever applied in factored form.

    Args:
        prev: Eigendecomposition of the previous landmark kernel matrix.
        a: First update vector of length m.
        b: Second update vector of length m.
        p: Number of power iterations.
        r: Rank of the refreshed decomposition.

    Returns:
        EigPair: Approximate leading eigenpairs of E_bar.
    """
    U, S = prev.vectors, prev.values
    m = U.shape[0]
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != (m,) or b.shape != (m,):
        raise InvalidArgumentError(f"update vectors must have length {m}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidArgumentError("update vectors have non-finite entries")
    if not 1 <= r <= m:
        raise InvalidArgumentError(f"rank {r} outside [1, {m}]")
    if r > prev.rank:
        raise InvalidArgumentError(
            f"cannot warm start rank {r} from a rank {prev.rank} decomposition"
        )
    if p < 1:
        raise InvalidArgumentError(f"power iterations must be >= 1, got {p}")

    def apply(Q):
        return (
            U @ (S[:, None] * (U.T @ Q))
            + np.outer(a, b @ Q)
            + np.outer(b, a @ Q)
        )

    Q = U[:, :r]
    for _ in range(p):
        Q, _ = linalg.qr(apply(Q), mode="economic")

    B = Q.T @ apply(Q)
    B = 0.5 * (B + B.T)
    ritz_values, ritz_vectors = linalg.eigh(B)
    return _canonical(Q @ ritz_vectors, ritz_values)


def pinv_sqrt(values: np.ndarray, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """
    Diagonal of the pseudo-inverse square root S^{+1/2}.

    Entries at or below rel_tol times the largest eigenvalue map to 0.
    """
    values = np.asarray(values, dtype=np.float64)
    top = max(float(np.max(values, initial=0.0)), 0.0)
    if top <= 0.0:
        raise DegenerateSpectrumError("all eigenvalues are non-positive")
    keep = values > rel_tol * top
    out = np.zeros_like(values)
    out[keep] = 1.0 / np.sqrt(values[keep])
    return out


def solve_ridge(Phi: np.ndarray, z: np.ndarray, theta: float) -> np.ndarray:
    """
    Solves min_w ||Phi w - z||^2 + theta ||w||^2 through the normal equations.

    Args:
        Phi: Design matrix of shape (m, r).
        z: Targets of length m.
        theta: Ridge parameter, >= 0.

    Returns:
        np.ndarray: Minimizer of length r.
    """
    Phi = np.atleast_2d(np.asarray(Phi, dtype=np.float64))
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (Phi.shape[0],):
        raise InvalidArgumentError(
            f"targets of shape {z.shape} do not match {Phi.shape[0]} rows"
        )
    if not np.isfinite(theta) or theta < 0:
        raise InvalidArgumentError(f"theta must be non-negative, got {theta}")
    r = Phi.shape[1]
    if theta == 0 and np.linalg.matrix_rank(Phi) < r:
        raise SingularSystemError("rank-deficient design with theta == 0")

    gram = Phi.T @ Phi
    gram[np.diag_indices(r)] += theta
    try:
        factor = linalg.cho_factor(gram, lower=True)
    except linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"normal equations are not positive definite: {exc}"
        ) from exc
    return linalg.cho_solve(factor, Phi.T @ z)
