"""
Shared fixtures for the test suite.
"""

import sys
from pathlib import Path

# Add parent directory to path so we can import src and evaluator modules
sys.path.append(str(Path(__file__).parent.parent))

import numpy as np
import pytest

from src.data_io.sample import Sample
from src.data_io.libsvm import write_libsvm
from src.data_io.synthetic import blobs_stream, regression_stream
from src.numerics.kernels import KernelConfig, kernel_cross


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def kernel():
    return KernelConfig(gamma=0.5)


@pytest.fixture
def gaussian_gram():
    """
    Factory for the Gaussian kernel matrix of m random points.
    """

    def build(rng, m, d=5, gamma=0.2):
        points = rng.normal(size=(m, d))
        cfg = KernelConfig(gamma=gamma)
        return points, kernel_cross(points, points, cfg), cfg

    return build


@pytest.fixture
def blobs():
    return blobs_stream(600, [[-2.0, -2.0], [2.0, 2.0]], cluster_std=0.5, seed=0)


@pytest.fixture
def regression():
    return regression_stream(400, 3, noise=0.1, seed=0)


@pytest.fixture
def libsvm_file(tmp_path):
    """
    A small binary dataset with {0, 1} labels in LIBSVM format.
    """
    rng = np.random.default_rng(7)
    samples = []
    for i in range(120):
        label = float(i % 2)
        features = rng.normal(loc=2.0 * label - 1.0, scale=0.6, size=4)
        samples.append(Sample(features=features, label=label))
    path = tmp_path / "toy.libsvm"
    write_libsvm(path, samples)
    return path
