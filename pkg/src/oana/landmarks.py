"""
Online adaptive Nyström approximation: landmark points maintained as online
kmeans centroids, with the eigendecomposition of their kernel matrix refreshed
after every centroid move.
"""

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from src.enums.learner_enums import EigSolver, KernelKind, LandmarkInit, UpdateKind
from src.exceptions import (
    InsufficientWarmupError,
    InvalidArgumentError,
)
from src.numerics.kernels import KernelConfig, kernel_cross
from src.numerics.linalg import (
    DEFAULT_POWER_ITERS,
    DEFAULT_REL_TOL,
    EigPair,
    pinv_sqrt,
    truncated_eig,
    warmstart_randomized_eig,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NystromMap:
    """
    Immutable Nyström feature map phi(x) = k(x, M) U_r S_r^{+1/2}.

    A LandmarkState hands these out so that the map in force before a
    landmark update stays evaluable after it.
    """

    landmarks: np.ndarray
    vectors: np.ndarray
    inv_sqrt: np.ndarray
    kernel: KernelConfig

    @property
    def dim(self) -> int:
        return self.inv_sqrt.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        """
        Embeds every row of X.

        Args:
            X: Matrix of shape (n, d).

        Returns:
            np.ndarray: Features of shape (n, r).
        """
        C = kernel_cross(X, self.landmarks, self.kernel)
        return (C @ self.vectors) * self.inv_sqrt

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.transform(np.asarray(x, dtype=np.float64)[None, :])[0]


@dataclass(frozen=True)
class UpdateOutcome:
    """
    Result of offering one sample to the landmark state.
    """

    kind: UpdateKind
    q: int | None = None
    old_centroid: np.ndarray | None = None
    new_centroid: np.ndarray | None = None
    refresh_seconds: float = 0.0

    @property
    def updated(self) -> bool:
        return self.kind is UpdateKind.UPDATED


UNCHANGED = UpdateOutcome(UpdateKind.UNCHANGED)


class LandmarkState:
    """
    The budget: m landmark points, their cluster counts and the rank-r
    eigendecomposition of their kernel matrix.

    Single writer. Attributes are rebound on update rather than mutated in
    place (except counts), so NystromMap snapshots stay valid.
    """

    def __init__(
        self,
        landmarks: np.ndarray,
        counts: np.ndarray,
        eig: EigPair,
        kernel: KernelConfig,
        epsilon: float,
        power_iters: int = DEFAULT_POWER_ITERS,
        rel_tol: float = DEFAULT_REL_TOL,
        eig_solver: EigSolver = EigSolver.WARMSTART,
    ):
        if epsilon < 0 or np.isnan(epsilon):
            raise InvalidArgumentError(f"epsilon must be non-negative, got {epsilon}")
        if power_iters < 1:
            raise InvalidArgumentError(f"power iterations must be >= 1, got {power_iters}")
        self.landmarks = landmarks
        self.counts = counts
        self.eig = eig
        self.kernel = kernel
        self.epsilon = float(epsilon)
        self.power_iters = power_iters
        self.rel_tol = rel_tol
        self.eig_solver = eig_solver
        self.inv_sqrt = pinv_sqrt(eig.values, rel_tol)

    @property
    def m(self) -> int:
        return self.landmarks.shape[0]

    @property
    def d(self) -> int:
        return self.landmarks.shape[1]

    @property
    def r(self) -> int:
        return self.eig.rank

    @property
    def stored_reals(self) -> int:
        # landmarks + eigenvectors + eigenvalues + counts; inv_sqrt is a cache
        return (
            self.landmarks.size
            + self.eig.vectors.size
            + self.eig.values.size
            + self.counts.size
        )

    def nystrom_map(self) -> NystromMap:
        return NystromMap(self.landmarks, self.eig.vectors, self.inv_sqrt, self.kernel)

    def feature_map(self, x: np.ndarray) -> np.ndarray:
        return feature_map(x, self)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return self.nystrom_map().transform(X)

    def kernel_matrix(self) -> np.ndarray:
        """
        Recomputes E from the current landmarks.
        """
        return kernel_cross(self.landmarks, self.landmarks, self.kernel)


def init_landmarks(
    warmup: np.ndarray,
    m: int,
    r: int,
    epsilon: float,
    kernel: KernelConfig,
    power_iters: int = DEFAULT_POWER_ITERS,
    rel_tol: float = DEFAULT_REL_TOL,
    eig_solver: EigSolver = EigSolver.WARMSTART,
    landmark_init: LandmarkInit = LandmarkInit.FIRST,
    seed: int | None = None,
) -> LandmarkState:
    """
    Builds the initial landmark state from the warm-up buffer.

    Args:
        warmup: Buffered samples of shape (n_buffer, d), n_buffer >= m.
        m: Number of landmarks.
        r: Rank of the feature map.
        epsilon: Squared-distance gate for centroid updates.
        kernel: Kernel configuration.
        power_iters: Power iterations per warm-started refresh.
        rel_tol: Relative eigenvalue cutoff of the pseudo-inverse.
        eig_solver: Refresh strategy after landmark updates.
        landmark_init: Take the first m buffered samples or a seeded sample.
        seed: Seed for the sampled initialisation.

    Returns:
        LandmarkState: State with unit counts and a from-scratch decomposition.
    """
    warmup = np.atleast_2d(np.asarray(warmup, dtype=np.float64))
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    if warmup.shape[0] < m:
        raise InsufficientWarmupError(
            f"warm-up buffer holds {warmup.shape[0]} samples, {m} required"
        )
    if not 1 <= r <= m:
        raise InvalidArgumentError(f"rank {r} outside [1, {m}]")

    if landmark_init is LandmarkInit.SAMPLED:
        rng = np.random.default_rng(seed)
        rows = np.sort(rng.choice(warmup.shape[0], size=m, replace=False))
    else:
        rows = np.arange(m)
    landmarks = warmup[rows].copy()
    landmarks.setflags(write=False)

    E = kernel_cross(landmarks, landmarks, kernel)
    eig = truncated_eig(E, r)
    logger.debug("initialised %d landmarks of dimension %d, rank %d", m, warmup.shape[1], r)
    return LandmarkState(
        landmarks=landmarks,
        counts=np.ones(m, dtype=np.int64),
        eig=eig,
        kernel=kernel,
        epsilon=epsilon,
        power_iters=power_iters,
        rel_tol=rel_tol,
        eig_solver=eig_solver,
    )


def _check_dim(x: np.ndarray, state: LandmarkState) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (state.d,):
        raise InvalidArgumentError(f"expected a vector of length {state.d}, got {x.shape}")
    return x


def nearest_landmark(x: np.ndarray, state: LandmarkState) -> tuple[int, float]:
    """
    Finds the closest landmark; ties go to the lowest index.

    Returns:
        tuple: (q, squared distance to landmark q)
    """
    x = _check_dim(x, state)
    dist_sq = cdist(x[None, :], state.landmarks, metric="sqeuclidean")[0]
    q = int(np.argmin(dist_sq))
    return q, float(dist_sq[q])


def rank2_delta(
    state: LandmarkState, q: int, new_u: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectors a, b with E(M_bar) = E(M) + a b^T + b a^T when landmark q moves
    to new_u.
    """
    if not 0 <= q < state.m:
        raise InvalidArgumentError(f"landmark index {q} outside [0, {state.m})")
    new_u = np.asarray(new_u, dtype=np.float64)
    old_u = state.landmarks[q]
    k_new = kernel_cross(new_u[None, :], state.landmarks, state.kernel)[0]
    k_old = kernel_cross(old_u[None, :], state.landmarks, state.kernel)[0]
    b = k_new - k_old
    self_new = kernel_cross(new_u[None, :], new_u[None, :], state.kernel)[0, 0]
    self_old = kernel_cross(old_u[None, :], old_u[None, :], state.kernel)[0, 0]
    b[q] = 0.5 * (self_new - self_old)
    a = np.zeros(state.m)
    a[q] = 1.0
    return a, b


def maybe_update_landmarks(x: np.ndarray, state: LandmarkState) -> UpdateOutcome:
    """
    Offers x to the online kmeans; moves its nearest centroid when the squared
    distance reaches epsilon and refreshes the eigendecomposition.

    Args:
        x: Sample of length d.
        state: Landmark state, mutated on update.

    Returns:
        UpdateOutcome: UNCHANGED, or the moved centroid.
    """
    q, dist_sq = nearest_landmark(x, state)
    if dist_sq < state.epsilon:
        return UNCHANGED

    x = np.asarray(x, dtype=np.float64)
    n_q = state.counts[q]
    old_u = state.landmarks[q].copy()
    new_u = (n_q * old_u + x) / (n_q + 1)

    landmarks = state.landmarks.copy()
    landmarks[q] = new_u
    landmarks.setflags(write=False)

    started = time.perf_counter()
    if state.eig_solver is EigSolver.EXACT:
        eig = truncated_eig(kernel_cross(landmarks, landmarks, state.kernel), state.r)
    else:
        a, b = rank2_delta(state, q, new_u)
        eig = warmstart_randomized_eig(state.eig, a, b, state.power_iters, state.r)
    refresh_seconds = time.perf_counter() - started

    inv_sqrt = pinv_sqrt(eig.values, state.rel_tol)
    state.landmarks = landmarks
    state.eig = eig
    state.inv_sqrt = inv_sqrt
    state.counts[q] += 1
    return UpdateOutcome(
        UpdateKind.UPDATED,
        q=q,
        old_centroid=old_u,
        new_centroid=new_u,
        refresh_seconds=refresh_seconds,
    )


def feature_map(x: np.ndarray, state: LandmarkState) -> np.ndarray:
    """
    Nyström embedding of x under the current landmarks (length r).
    """
    x = _check_dim(x, state)
    return state.nystrom_map()(x)


def state_to_dict(state: LandmarkState) -> dict:
    return {
        "landmarks": state.landmarks,
        "counts": state.counts,
        "eigenvectors": state.eig.vectors,
        "eigenvalues": state.eig.values,
        "gamma": state.kernel.gamma,
        "kernel": state.kernel.kind.value,
        # JSON has no infinity
        "epsilon": "inf" if np.isinf(state.epsilon) else state.epsilon,
        "power_iters": state.power_iters,
        "rel_tol": state.rel_tol,
        "eig_solver": state.eig_solver.value,
    }


def state_from_dict(document: dict) -> LandmarkState:
    landmarks = np.asarray(document["landmarks"], dtype=np.float64)
    landmarks.setflags(write=False)
    vectors = np.asarray(document["eigenvectors"], dtype=np.float64)
    values = np.asarray(document["eigenvalues"], dtype=np.float64)
    vectors.setflags(write=False)
    values.setflags(write=False)
    return LandmarkState(
        landmarks=landmarks,
        counts=np.asarray(document["counts"], dtype=np.int64),
        eig=EigPair(vectors=vectors, values=values),
        kernel=KernelConfig(gamma=float(document["gamma"]), kind=KernelKind(document["kernel"])),
        epsilon=float(document["epsilon"]),
        power_iters=int(document["power_iters"]),
        rel_tol=float(document["rel_tol"]),
        eig_solver=EigSolver(document["eig_solver"]),
    )
