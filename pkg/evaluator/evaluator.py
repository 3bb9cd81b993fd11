"""
Kernel approximation error of the budgeted feature maps.
"""

import logging
from dataclasses import dataclass

import numpy as np

from evaluator.budget import BudgetReport
from src.enums.learner_enums import ApproxMethod, EigSolver
from src.exceptions import InvalidArgumentError
from src.learners.fogd_learner import FourierFeatures, parity_dimension
from src.numerics.kernels import KernelConfig, kernel_cross
from src.oana.landmarks import init_landmarks, maybe_update_landmarks

logger = logging.getLogger(__name__)


def relative_approx_error(G: np.ndarray, Gbar: np.ndarray) -> float:
    """
    Relative Frobenius error ||G - Gbar||_F / ||G||_F.
    """
    G = np.asarray(G, dtype=np.float64)
    Gbar = np.asarray(Gbar, dtype=np.float64)
    if G.shape != Gbar.shape:
        raise InvalidArgumentError(f"shapes differ: {G.shape} vs {Gbar.shape}")
    norm = np.linalg.norm(G, "fro")
    if norm == 0.0:
        raise InvalidArgumentError("reference kernel matrix has zero norm")
    return float(np.linalg.norm(G - Gbar, "fro") / norm)


@dataclass(frozen=True)
class ApproxPoint:
    """
    One (budget, error) point of an approximation curve.
    """

    method: str
    m: int
    r: int
    budget: int
    error: float
    seed: int


def approx_grams(
    stream,
    method: ApproxMethod,
    m: int,
    r: int,
    epsilon: float,
    subset_size: int,
    kernel: KernelConfig,
    seed: int = 0,
    power_iters: int = 3,
    rel_tol: float = 1e-6,
    eig_solver: EigSolver = EigSolver.WARMSTART,
) -> tuple[np.ndarray, np.ndarray, BudgetReport]:
    """
    Runs a method's feature state over the stream and returns the exact and
    the approximate kernel matrix on a seeded subset.

    OANA builds its landmarks from the first m points and then moves them over
    the whole stream; NOGD keeps the first m points; FOGD draws Fourier
    features at the parity dimension. The stream is read once.

    Args:
        stream: Sample stream.
        method: oana, nogd or fogd.
        m: Number of landmarks.
        r: Rank of the Nyström map.
        epsilon: Landmark gate for OANA.
        subset_size: Number of stream points the matrices are built on.
        kernel: Kernel configuration.
        seed: Seed for the subset draw and the Fourier features.
        power_iters: Power iterations per landmark refresh.
        rel_tol: Relative eigenvalue cutoff of the pseudo-inverse.
        eig_solver: Landmark refresh solver for OANA.

    Returns:
        tuple: (G, Gbar, budget report)
    """
    n = len(stream)
    if not 1 <= subset_size <= n:
        raise InvalidArgumentError(f"subset size {subset_size} outside [1, {n}]")
    chosen = set(np.random.default_rng(seed).choice(n, size=subset_size, replace=False).tolist())
    d = stream.dim

    subset = []
    warmup = []
    state = None
    for position, sample in enumerate(stream):
        if position in chosen:
            subset.append(sample.features)
        if method is ApproxMethod.FOGD:
            continue
        if state is None:
            warmup.append(sample.features)
            if len(warmup) < m:
                continue
            state = init_landmarks(
                np.vstack(warmup),
                m,
                r,
                epsilon if method is ApproxMethod.OANA else np.inf,
                kernel,
                power_iters=power_iters,
                rel_tol=rel_tol,
                eig_solver=eig_solver,
            )
            if method is ApproxMethod.OANA:
                for x in warmup:
                    maybe_update_landmarks(x, state)
            warmup = []
        elif method is ApproxMethod.OANA:
            maybe_update_landmarks(sample.features, state)

    S = np.vstack(subset)
    G = kernel_cross(S, S, kernel)
    if method is ApproxMethod.FOGD:
        D = parity_dimension(m, r, d)
        features = FourierFeatures.draw(d, D, kernel, seed)
        Z = features.transform(S)
        report = BudgetReport(
            method=method.value,
            components={"frequencies": features.omega.size, "phases": features.phase.size},
        )
    else:
        if state is None:
            raise InvalidArgumentError(f"stream of {n} points is shorter than m={m}")
        Z = state.transform(S)
        report = BudgetReport(
            method=method.value,
            components={
                "landmarks": state.landmarks.size,
                "eigenvectors": state.eig.vectors.size,
                "eigenvalues": state.eig.values.size,
                "counts": state.counts.size,
            },
        )
    return G, Z @ Z.T, report


def approx_experiment(
    stream,
    method: ApproxMethod,
    m: int,
    r: int,
    epsilon: float,
    subset_size: int,
    kernel: KernelConfig,
    seed: int = 0,
    power_iters: int = 3,
    rel_tol: float = 1e-6,
    eig_solver: EigSolver = EigSolver.WARMSTART,
) -> ApproxPoint:
    """
    Measures how well a method's features reproduce the exact kernel matrix
    on a seeded subset. Arguments as in approx_grams.

    Returns:
        ApproxPoint: The measured budget and error.
    """
    G, Gbar, report = approx_grams(
        stream,
        method,
        m,
        r,
        epsilon,
        subset_size,
        kernel,
        seed=seed,
        power_iters=power_iters,
        rel_tol=rel_tol,
        eig_solver=eig_solver,
    )
    error = relative_approx_error(G, Gbar)
    logger.info(
        "%s m=%d r=%d budget=%d: relative error %.6f", method.value, m, r, report.budget, error
    )
    return ApproxPoint(
        method=method.value, m=m, r=r, budget=report.budget, error=error, seed=seed
    )
