"""
Stream construction: a one-pass, optionally shuffled sequence of samples with
classification labels normalized to {-1, +1}.
"""

import hashlib
import logging
from collections import Counter
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.data_io.libsvm import LibsvmIndex, parse_libsvm_line, scan_libsvm
from src.data_io.sample import Sample
from src.enums.learner_enums import Task
from src.exceptions import IngestionError

logger = logging.getLogger(__name__)


class StreamSpec(BaseModel):
    """
    Where a stream comes from and how it is ordered and labeled.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: Path
    dim: int | None = Field(default=None, ge=1)
    shuffle_seed: int | None = None
    task: Task = Task.CLASSIFICATION
    label_map: dict[float, float] | None = None


def infer_label_map(label_counts: Counter) -> dict[float, float]:
    """
    Maps raw classification labels to {-1, +1}.

    {-1, +1} is kept, {0, 1} maps 0 to -1, and any other label set becomes
    most-frequent class (+1) against the rest (-1).
    """
    labels = set(label_counts)
    if labels <= {-1.0, 1.0}:
        return {label: label for label in sorted(labels)}
    if labels <= {0.0, 1.0}:
        return {0.0: -1.0, 1.0: 1.0}
    # ties go to the smallest label
    majority = min(labels, key=lambda label: (-label_counts[label], label))
    return {label: (1.0 if label == majority else -1.0) for label in sorted(labels)}


class _FileSource:
    def __init__(self, index: LibsvmIndex, dim: int):
        self.index = index
        self.dim = dim

    def __len__(self) -> int:
        return len(self.index)

    def read(self, positions: np.ndarray):
        with open(self.index.path, "rb") as f:
            for position in positions:
                f.seek(int(self.index.offsets[position]))
                line = f.readline().decode("utf-8")
                sample = parse_libsvm_line(
                    line, self.dim, int(self.index.line_numbers[position])
                )
                yield sample.features, sample.label


class _ArraySource:
    def __init__(self, X: np.ndarray, y: np.ndarray):
        self.X = X
        self.y = y
        self.dim = X.shape[1]

    def __len__(self) -> int:
        return self.X.shape[0]

    def read(self, positions: np.ndarray):
        for position in positions:
            yield self.X[position].copy(), float(self.y[position])


class _SubsetSource:
    def __init__(self, source, positions: np.ndarray):
        self.source = source
        self.positions = positions
        self.dim = source.dim

    def __len__(self) -> int:
        return self.positions.shape[0]

    def read(self, positions: np.ndarray):
        return self.source.read(self.positions[positions])


class Stream:
    """
    A one-pass iterable of Samples.

    Iterating reads the source once in the stream's order. reorder() and
    prefix() return new streams over the same source without reading it.
    """

    def __init__(
        self,
        source,
        task: Task,
        label_map: dict[float, float] | None,
        order: np.ndarray | None = None,
        digest: str = "",
    ):
        self._source = source
        self.task = task
        self.label_map = label_map
        self.order = order if order is not None else np.arange(len(source))
        self.digest = digest

    @classmethod
    def from_arrays(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        task: Task = Task.CLASSIFICATION,
        shuffle_seed: int | None = None,
        label_map: dict[float, float] | None = None,
    ) -> "Stream":
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64)
        if X.shape[0] != y.shape[0]:
            raise IngestionError(f"{X.shape[0]} samples but {y.shape[0]} labels")
        if X.shape[0] == 0:
            raise IngestionError("empty stream")
        if task is Task.CLASSIFICATION and label_map is None:
            label_map = infer_label_map(Counter(y.tolist()))
        digest = hashlib.sha256(X.tobytes() + y.tobytes()).hexdigest()
        stream = cls(_ArraySource(X, y), task, label_map, digest=digest)
        return stream.reorder(shuffle_seed)

    @property
    def dim(self) -> int:
        return self._source.dim

    def __len__(self) -> int:
        return self.order.shape[0]

    def reorder(self, shuffle_seed: int | None) -> "Stream":
        """
        Stream in file order (no seed) or in a seeded permutation of it.
        """
        n = len(self._source)
        if shuffle_seed is None:
            order = np.arange(n)
        else:
            order = np.random.default_rng(shuffle_seed).permutation(n)
        return Stream(self._source, self.task, self.label_map, order, self.digest)

    def prefix(self, n: int) -> "Stream":
        return Stream(self._source, self.task, self.label_map, self.order[:n], self.digest)

    def skip(self, n: int) -> "Stream":
        return Stream(self._source, self.task, self.label_map, self.order[n:], self.digest)

    def subsample(self, n: int, seed: int | None) -> "Stream":
        """
        Seeded n-sample subset, kept in this stream's order. The subset becomes
        the source, so reorder() permutes within it.
        """
        if n < 1:
            raise IngestionError(f"subsample size must be >= 1, got {n}")
        if n >= len(self):
            return self
        picked = np.sort(np.random.default_rng(seed).choice(len(self), size=n, replace=False))
        source = _SubsetSource(self._source, self.order[picked])
        return Stream(source, self.task, self.label_map, digest=self.digest)

    def _map_label(self, label: float) -> float:
        if self.task is Task.REGRESSION:
            return label
        mapped = self.label_map.get(label, label) if self.label_map else label
        if mapped not in (-1.0, 1.0):
            raise IngestionError(f"label {label} has no mapping to -1/+1")
        return mapped

    def __iter__(self):
        for features, label in self._source.read(self.order):
            yield Sample(features=features, label=self._map_label(label))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Materializes the stream; for diagnostics on small streams only.
        """
        samples = list(self)
        return (
            np.vstack([s.features for s in samples]),
            np.asarray([s.label for s in samples]),
        )


def build_stream(spec: StreamSpec) -> Stream:
    """
    Builds a stream over a LIBSVM file.

    Args:
        spec: Stream specification.

    Returns:
        Stream: Samples in file order, or in the seeded permutation.
    """
    path = Path(spec.path)
    if not path.is_file():
        raise IngestionError(f"dataset not found: {path}")
    index = scan_libsvm(path)
    if len(index) == 0:
        raise IngestionError(f"dataset is empty: {path}")
    dim = spec.dim or index.max_index
    if dim < 1:
        raise IngestionError(f"dataset has no features: {path}")
    if index.max_index > dim:
        raise IngestionError(
            f"declared dimension {dim} is smaller than feature index {index.max_index}"
        )

    label_map = None
    if spec.task is Task.CLASSIFICATION:
        label_map = spec.label_map or infer_label_map(index.label_counts)
        logger.info("label map for %s: %s", path.name, label_map)

    stream = Stream(_FileSource(index, dim), spec.task, label_map, digest=index.digest)
    return stream.reorder(spec.shuffle_seed)
