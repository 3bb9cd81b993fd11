"""
Artifact writing: deterministic JSON and CSV files, staged and moved into
place only when a whole run has succeeded.
"""

import csv
import logging
import os
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path

import orjson

from src.learners.checkpoint import JSON_OPTIONS

logger = logging.getLogger(__name__)


def dumps_json(document) -> bytes:
    return orjson.dumps(document, option=JSON_OPTIONS) + b"\n"


def write_json(path: Path, document) -> None:
    Path(path).write_bytes(dumps_json(document))


def write_rows_csv(path: Path, header, rows) -> None:
    """
    Writes dict rows in header order; floats use their shortest repr.
    """
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [repr(row[k]) if isinstance(row[k], float) else row[k] for k in header]
            )


@contextmanager
def staged_output(output_dir: Path):
    """
    Yields a temporary directory inside output_dir. On normal exit every file
    in it is renamed into output_dir; on error the directory is removed and
    output_dir is left as it was.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=".staging-", dir=output_dir))
    try:
        yield stage
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    for staged in sorted(stage.iterdir()):
        os.replace(staged, output_dir / staged.name)
    stage.rmdir()
    logger.debug("artifacts committed to %s", output_dir)
