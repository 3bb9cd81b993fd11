"""
Experiment orchestration: seeded prequential passes, multi-shuffle runs,
epsilon sweeps, hyperparameter tuning and approximation-error sweeps.
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed
from sklearn.preprocessing import MinMaxScaler
from tqdm import tqdm

from evaluator.budget import BudgetAudit, BudgetReport
from evaluator.evaluator import ApproxPoint, approx_experiment
from evaluator.metrics import MetricsLog
from src.config import RunConfig
from src.data_io.stream import Stream, build_stream
from src.enums.learner_enums import ApproxMethod, Task
from src.exceptions import DegenerateSpectrumError, IngestionError, SingularSystemError
from src.experiments.artifacts import staged_output, write_json, write_rows_csv
from src.learners.checkpoint import learners, load_checkpoint, save_checkpoint
from src.learners.learner import Learner, LearnerStats
from src.numerics.kernels import KernelConfig
from src.tracing import observe, score_current_run

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("epsilon", "accuracy", "metric", "updates", "time")
APPROX_HEADER = ("method", "m", "r", "budget", "error", "error_std", "seeds")
DEFAULT_APPROX_MS = (20, 50, 100, 200)


@dataclass
class PassResult:
    """
    Outcome of one seeded pass over the stream.
    """

    index: int
    seed: int
    log: MetricsLog
    stats: LearnerStats
    budget: BudgetReport


def build_learner(config: RunConfig, warmup: np.ndarray) -> Learner:
    """
    Instantiates the configured learner from the warm-up buffer.
    """
    return learners[config.method.value].from_config(config, warmup)


def checkpoint_path(config: RunConfig, index: int) -> Path:
    return Path(config.output_dir) / "checkpoints" / f"pass_{index}.json"


def limit_stream(config: RunConfig, stream: Stream) -> Stream:
    """
    Applies config.max_samples as a seeded subsample.
    """
    if config.max_samples is None or len(stream) <= config.max_samples:
        return stream
    logger.info("subsampling %d of %d samples (seed %d)", config.max_samples, len(stream), config.seed)
    return stream.subsample(config.max_samples, config.seed)


def _scaler_from_range(scaler_range) -> MinMaxScaler:
    # fitting on the two extreme rows reproduces the warm-up fit exactly
    return MinMaxScaler().fit(np.asarray(scaler_range, dtype=np.float64))


@observe(name="run_pass")
def run_pass(config: RunConfig, stream: Stream, index: int = 0, resume: bool = False) -> PassResult:
    """
    One test-then-train pass.

    The first warmup_buffer samples are buffered to build the learner, then
    replayed as the first steps of the pass, so every method is scored on
    the same steps. The stream is read once.

    Args:
        config: Run configuration.
        stream: Ordered stream for this pass.
        index: Pass number, used for checkpoint names.
        resume: Continue from this pass's checkpoint when one exists.

    Returns:
        PassResult: Metrics log, learner counters and budget report.
    """
    seed = config.seed + index
    ckpt = checkpoint_path(config, index)
    learner = None
    scaler = None
    scaler_range = None
    log = MetricsLog(stream.task, timing=config.timing)
    remaining = stream
    if resume and ckpt.is_file():
        learner, consumed, extra = load_checkpoint(ckpt)
        log = MetricsLog.from_accumulators(extra["log"])
        scaler_range = extra.get("scaler_range")
        if scaler_range is not None:
            scaler = _scaler_from_range(scaler_range)
        remaining = stream.skip(consumed)
        logger.info("pass %d resumes after %d of %d steps", index, consumed, len(stream))

    samples = iter(remaining)
    pending = []
    if learner is None:
        pending = list(itertools.islice(samples, config.warmup_buffer))
        if not pending:
            raise IngestionError("stream is empty")
        warmup = np.vstack([s.features for s in pending])
        if config.scale:
            scaler = MinMaxScaler().fit(warmup)
            scaler_range = np.vstack([scaler.data_min_, scaler.data_max_])
            warmup = scaler.transform(warmup)
        learner = build_learner(config, warmup)
    audit = BudgetAudit(learner.budget_report()) if config.audit else None

    progress = tqdm(
        total=len(stream),
        initial=len(log),
        desc=f"{config.method.value} pass {index}",
        disable=not config.progress,
    )
    for sample in itertools.chain(pending, samples):
        x = sample.features
        if scaler is not None:
            x = scaler.transform(x[None, :])[0]
        started = time.perf_counter_ns() if config.timing else 0
        result = learner.process(x, sample.label)
        elapsed = time.perf_counter_ns() - started if config.timing else 0
        log.record(result.prediction, sample.label, result.loss, result.updated, elapsed)
        if audit is not None:
            audit.check(learner.budget_report(), len(log))
        progress.update(1)
        if config.checkpoint_every and len(log) % config.checkpoint_every == 0:
            save_checkpoint(
                ckpt,
                learner,
                len(log),
                {"log": log.accumulators(), "scaler_range": scaler_range},
            )
    progress.close()

    logger.info(
        "pass %d (seed %d): %s %.6f after %d steps, %d landmark updates",
        index,
        seed,
        log.metric_name,
        log.final_metric,
        len(log),
        learner.stats.updates,
    )
    score_current_run(f"final_{log.metric_name}", log.final_metric, comment=config.method.value)
    return PassResult(
        index=index,
        seed=seed,
        log=log,
        stats=learner.stats,
        budget=learner.budget_report(),
    )


def summarize(config: RunConfig, results: list[PassResult]) -> dict:
    finals = np.array([r.log.final_metric for r in results])
    summary = {
        "method": config.method.value,
        "metric": results[0].log.metric_name,
        "mean": float(np.mean(finals)),
        "std": float(np.std(finals)),
        "updates_mean": float(np.mean([r.stats.updates for r in results])),
        "budget": results[0].budget.as_dict(),
        "passes": [
            {"index": r.index, "seed": r.seed, "skipped": r.stats.skipped, **r.log.summary()}
            for r in results
        ],
    }
    if summary["metric"] == "accuracy":
        summary["mean_percent"] = 100.0 * summary["mean"]
        summary["std_percent"] = 100.0 * summary["std"]
    if config.timing:
        summary["wall_seconds_mean"] = float(np.mean([r.log.elapsed_ns for r in results])) / 1e9
        summary["refresh_seconds_mean"] = float(np.mean([r.stats.refresh_seconds for r in results]))
    return summary


def manifest(config: RunConfig, stream: Stream) -> dict:
    return {
        "dataset": str(config.data.path),
        "dataset_digest": stream.digest,
        "n": len(stream),
        "dim": stream.dim,
        "label_map": stream.label_map,
        "seeds": [config.seed + i for i in range(config.shuffles)],
        "config": config.model_dump(mode="json", by_alias=True),
    }


@observe(name="run")
def run(config: RunConfig, resume: bool = False, stream: Stream | None = None) -> dict:
    """
    Runs `shuffles` seeded passes and writes the per-pass CSVs, the summary
    and the manifest into config.output_dir.

    Args:
        config: Run configuration.
        resume: Continue passes from their checkpoints.
        stream: Pre-built stream; read from config.data when omitted.

    Returns:
        dict: The summary document.
    """
    base = limit_stream(config, stream if stream is not None else build_stream(config.data))
    logger.info(
        "running %s on %d samples of dimension %d, %d shuffles",
        config.method.value,
        len(base),
        base.dim,
        config.shuffles,
    )
    results = Parallel(n_jobs=config.n_jobs)(
        delayed(run_pass)(config, base.reorder(config.seed + i), i, resume)
        for i in range(config.shuffles)
    )
    summary = summarize(config, results)
    with staged_output(config.output_dir) as stage:
        for result in results:
            result.log.write_csv(stage / f"pass_{result.index}.csv")
        write_json(stage / "summary.json", summary)
        write_json(stage / "manifest.json", manifest(config, base))
    return summary


def _sweep_cell(config: RunConfig, epsilon: float, stream: Stream) -> dict:
    label = "inf" if math.isinf(epsilon) else repr(float(epsilon))
    cell = config.model_copy(
        update={"epsilon": epsilon, "output_dir": Path(config.output_dir) / f"eps_{label}", "n_jobs": 1}
    )
    summary = run(cell, stream=stream)
    return {
        "epsilon": float(epsilon),
        "accuracy": summary.get("mean_percent", math.nan),
        "metric": summary["mean"],
        "updates": summary["updates_mean"],
        "time": summary.get("wall_seconds_mean", 0.0),
    }


@observe(name="sweep_epsilon")
def sweep_epsilon(config: RunConfig, epsilons) -> list[dict]:
    """
    One run per epsilon; writes sweep_epsilon.csv with the mean metric and
    landmark update count per cell.
    """
    epsilons = list(epsilons)
    if not epsilons:
        raise ValueError("epsilon list is empty")
    stream = build_stream(config.data)
    rows = Parallel(n_jobs=config.n_jobs)(
        delayed(_sweep_cell)(config, epsilon, stream) for epsilon in epsilons
    )
    with staged_output(config.output_dir) as stage:
        write_rows_csv(stage / "sweep_epsilon.csv", SWEEP_HEADER, rows)
    return rows


def _tune_cell(config: RunConfig, stream: Stream, params: dict) -> dict:
    cell = config.model_copy(update={**params, "checkpoint_every": None, "progress": False})
    try:
        result = run_pass(cell, stream)
        value = result.log.final_metric
    except (DegenerateSpectrumError, SingularSystemError) as exc:
        logger.warning("tuning cell %s failed: %s", params, exc)
        value = math.nan
    return {**params, "metric": value}


@observe(name="tune")
def tune(config: RunConfig, grid: dict, fraction: float = 0.2) -> dict:
    """
    Grid search over gamma, eta and epsilon on a seeded prefix of the stream.

    Args:
        config: Base configuration.
        grid: Parameter name to list of candidate values.
        fraction: Share of the seeded stream used for tuning.

    Returns:
        dict: Every cell's score and the best parameters.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    names = sorted(grid)
    base = limit_stream(config, build_stream(config.data)).reorder(config.seed)
    prefix = base.prefix(max(config.warmup_buffer, int(len(base) * fraction)))
    cells = [dict(zip(names, values)) for values in itertools.product(*(grid[n] for n in names))]
    scored = Parallel(n_jobs=config.n_jobs)(
        delayed(_tune_cell)(config, prefix, params) for params in cells
    )

    classification = config.data.task is Task.CLASSIFICATION
    finite = [cell for cell in scored if not math.isnan(cell["metric"])]
    if not finite:
        raise DegenerateSpectrumError("every tuning cell failed")
    best = (max if classification else min)(finite, key=lambda cell: cell["metric"])
    document = {
        "prefix": len(prefix),
        "objective": "accuracy" if classification else "rmse",
        "cells": scored,
        "best": best,
    }
    with staged_output(config.output_dir) as stage:
        write_json(stage / "tune.json", document)
    return document


@observe(name="approx_sweep")
def approx_sweep(
    stream: Stream,
    output_dir: Path,
    kernel: KernelConfig,
    ms=DEFAULT_APPROX_MS,
    seeds=(0, 1, 2),
    methods=tuple(ApproxMethod),
    r_ratio: float = 0.8,
    epsilon: float = 0.0,
    subset_size: int = 10_000,
    power_iters: int = 3,
    n_jobs: int = 1,
) -> list[dict]:
    """
    Approximation error of every method at each m, averaged over seeds;
    writes approx.csv.
    """
    subset_size = min(subset_size, len(stream))
    cells = [(method, m, seed) for method in methods for m in ms for seed in seeds]
    points: list[ApproxPoint] = Parallel(n_jobs=n_jobs)(
        delayed(approx_experiment)(
            stream,
            method,
            m,
            max(1, round(r_ratio * m)),
            epsilon,
            subset_size,
            kernel,
            seed=seed,
            power_iters=power_iters,
        )
        for method, m, seed in cells
    )

    rows = []
    for method in methods:
        for m in ms:
            group = [p for p in points if p.method == method.value and p.m == m]
            errors = np.array([p.error for p in group])
            rows.append(
                {
                    "method": method.value,
                    "m": m,
                    "r": group[0].r,
                    "budget": group[0].budget,
                    "error": float(np.mean(errors)),
                    "error_std": float(np.std(errors)),
                    "seeds": len(group),
                }
            )
    with staged_output(output_dir) as stage:
        write_rows_csv(stage / "approx.csv", APPROX_HEADER, rows)
    return rows
