"""
Reading and writing the LIBSVM text format.

Each record line is ``<label> <index>:<value> ...`` with 1-based, strictly
increasing indices. Text after ``#`` is a comment and ``qid:`` tokens are
ignored.
"""

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from src.data_io.sample import Sample
from src.exceptions import IngestionError, ParseError

logger = logging.getLogger(__name__)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_libsvm_line(line: str, dim: int, line_number: int | None = None) -> Sample:
    """
    Parses one record into a dense sample.

    Args:
        line: Record text.
        dim: Feature dimension d; indices above d are an error.
        line_number: 1-based position used in error messages.

    Returns:
        Sample: Dense features with unlisted entries set to 0.
    """
    body = _strip(line)
    if not body:
        raise ParseError("empty record", line_number)
    tokens = body.split()
    try:
        label = float(tokens[0])
    except ValueError:
        raise ParseError(f"malformed label {tokens[0]!r}", line_number) from None
    if not np.isfinite(label):
        raise ParseError(f"non-finite label {tokens[0]!r}", line_number)

    features = np.zeros(dim)
    previous = 0
    for token in tokens[1:]:
        index_text, sep, value_text = token.partition(":")
        if not sep:
            raise ParseError(f"malformed token {token!r}", line_number)
        if index_text == "qid":
            continue
        try:
            index = int(index_text)
            value = float(value_text)
        except ValueError:
            raise ParseError(f"malformed token {token!r}", line_number) from None
        if index <= previous:
            raise ParseError(f"index {index} is not increasing", line_number)
        if index > dim:
            raise ParseError(f"index {index} exceeds dimension {dim}", line_number)
        if not np.isfinite(value):
            raise ParseError(f"non-finite value in {token!r}", line_number)
        features[index - 1] = value
        previous = index
    return Sample(features=features, label=label)


def format_libsvm_line(sample: Sample) -> str:
    """
    Serializes a sample, listing its non-zero entries.
    """
    parts = [repr(float(sample.label))]
    for index in np.flatnonzero(sample.features):
        parts.append(f"{index + 1}:{float(sample.features[index])!r}")
    return " ".join(parts)


def write_libsvm(path: Path, samples) -> None:
    with open(path, "w") as f:
        for sample in samples:
            f.write(format_libsvm_line(sample) + "\n")


@dataclass
class LibsvmIndex:
    """
    Byte offsets of every record plus what a single scan learns about a file.
    """

    path: Path
    offsets: np.ndarray
    line_numbers: np.ndarray
    max_index: int
    label_counts: Counter = field(default_factory=Counter)
    digest: str = ""

    def __len__(self) -> int:
        return self.offsets.shape[0]


def scan_libsvm(path: Path) -> LibsvmIndex:
    """
    Scans a file once, recording record offsets, the largest feature index,
    the raw label counts and a sha256 digest of the bytes.
    """
    path = Path(path)
    offsets = []
    line_numbers = []
    max_index = 0
    label_counts = Counter()
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as f:
            position = 0
            for number, raw in enumerate(f, start=1):
                digest.update(raw)
                body = _strip(raw.decode("utf-8"))
                if body:
                    tokens = body.split()
                    try:
                        label_counts[float(tokens[0])] += 1
                    except ValueError:
                        raise ParseError(f"malformed label {tokens[0]!r}", number) from None
                    for token in reversed(tokens[1:]):
                        index_text, _, _ = token.partition(":")
                        if index_text != "qid":
                            try:
                                max_index = max(max_index, int(index_text))
                            except ValueError:
                                raise ParseError(f"malformed token {token!r}", number) from None
                            break
                    offsets.append(position)
                    line_numbers.append(number)
                position += len(raw)
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc

    logger.info("scanned %s: %d records, max index %d", path, len(offsets), max_index)
    return LibsvmIndex(
        path=path,
        offsets=np.asarray(offsets, dtype=np.int64),
        line_numbers=np.asarray(line_numbers, dtype=np.int64),
        max_index=max_index,
        label_counts=label_counts,
        digest=digest.hexdigest(),
    )
