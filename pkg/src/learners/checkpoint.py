"""
Versioned learner checkpoints, sufficient to resume a pass deterministically.
"""

import logging
from pathlib import Path

import orjson

from src.enums.learner_enums import Method
from src.exceptions import ConfigError, IngestionError
from src.learners.fogd_learner import FogdLearner
from src.learners.learner import Learner
from src.learners.nogd_learner import NogdLearner
from src.learners.nolana_learner import NolanaLearner
from src.learners.pa_learner import PALearner

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

JSON_OPTIONS = (
    orjson.OPT_SORT_KEYS
    | orjson.OPT_INDENT_2
    | orjson.OPT_SERIALIZE_NUMPY
    | orjson.OPT_NON_STR_KEYS
)

# Learner mapping for checkpoint restore and run construction
learners = {
    Method.PA.value: PALearner,
    Method.FOGD.value: FogdLearner,
    Method.NOGD.value: NogdLearner,
    Method.NOLANA.value: NolanaLearner,
}


def checkpoint_document(learner: Learner, steps: int, metrics: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "method": learner.name,
        "steps": steps,
        "metrics": metrics,
        "stats": {
            "updates": learner.stats.updates,
            "skipped": learner.stats.skipped,
        },
        "learner": learner.to_checkpoint(),
    }


def save_checkpoint(path: Path, learner: Learner, steps: int, metrics: dict) -> None:
    """
    Writes the learner after `steps` stream points, with the metric
    accumulators at that point. The file is replaced atomically.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    staged = path.with_suffix(path.suffix + ".tmp")
    staged.write_bytes(orjson.dumps(checkpoint_document(learner, steps, metrics), option=JSON_OPTIONS))
    staged.replace(path)
    logger.debug("checkpoint after %d steps written to %s", steps, path)


def load_checkpoint(path: Path) -> tuple[Learner, int, dict]:
    """
    Restores a learner from a checkpoint file.

    Returns:
        tuple: (learner, stream steps consumed, metric accumulators)
    """
    path = Path(path)
    try:
        document = orjson.loads(path.read_bytes())
    except (OSError, orjson.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read checkpoint {path}: {exc}") from exc

    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise ConfigError(f"checkpoint {path} has format_version {version}, expected {FORMAT_VERSION}")
    method = document.get("method")
    if method not in learners:
        raise ConfigError(f"checkpoint {path} names unknown method {method!r}")

    learner = learners[method].from_checkpoint(document["learner"])
    learner.stats.updates = int(document["stats"]["updates"])
    learner.stats.skipped = int(document["stats"]["skipped"])
    learner.stats.steps = int(document["steps"])
    return learner, int(document["steps"]), document["metrics"]
