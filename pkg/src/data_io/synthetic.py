"""
Synthetic streams for tests and smoke runs.
"""

import numpy as np
from sklearn.datasets import make_blobs, make_regression

from src.data_io.stream import Stream
from src.enums.learner_enums import Task


def blobs_stream(n: int, centers, cluster_std: float = 0.5, seed: int = 0) -> Stream:
    """
    Gaussian blobs; blob 0 is labeled -1 and every other blob +1.
    """
    X, y = make_blobs(
        n_samples=n,
        centers=np.asarray(centers, dtype=float),
        cluster_std=cluster_std,
        random_state=seed,
    )
    return Stream.from_arrays(X, np.where(y == 0, -1.0, 1.0), Task.CLASSIFICATION)


def regression_stream(n: int, d: int, noise: float = 0.1, seed: int = 0) -> Stream:
    X, y = make_regression(n_samples=n, n_features=d, noise=noise, random_state=seed)
    return Stream.from_arrays(X, y, Task.REGRESSION)
