"""
Langfuse tracing for experiment runs.

Tracing is switched off unless Langfuse credentials are configured, so
offline runs never try to reach the server.
"""

import logging
import os

from dotenv import load_dotenv

load_dotenv()

TRACING_ENABLED = bool(
    os.getenv("LANGFUSE_PUBLIC_KEY") and os.getenv("LANGFUSE_SECRET_KEY")
)
if not TRACING_ENABLED:
    os.environ.setdefault("LANGFUSE_TRACING_ENABLED", "false")

from langfuse import get_client, observe  # noqa: E402

logger = logging.getLogger(__name__)

__all__ = ["observe", "score_current_run", "flush"]


def score_current_run(name: str, value: float, comment: str | None = None) -> None:
    """
    Attaches a numeric score to the trace of the enclosing @observe call.
    """
    if not TRACING_ENABLED:
        return
    try:
        get_client().score_current_trace(
            name=name, value=float(value), data_type="NUMERIC", comment=comment
        )
    except Exception as exc:
        logger.warning("could not score trace: %s", exc)


def flush() -> None:
    if TRACING_ENABLED:
        get_client().flush()
