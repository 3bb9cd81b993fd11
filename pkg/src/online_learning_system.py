"""
Command-line harness for budgeted online kernel learning experiments.
"""

import functools
import logging
import math
from pathlib import Path

import click
from pydantic import ValidationError

from src import tracing
from src.config import RunConfig, get_settings
from src.data_io.stream import StreamSpec, build_stream
from src.enums.learner_enums import (
    ApproxMethod,
    EigSolver,
    EtaSchedule,
    LandmarkInit,
    LossKind,
    Method,
    StageOneMap,
    Task,
)
from src.exceptions import (
    BudgetViolationError,
    ConfigError,
    DegenerateSpectrumError,
    IngestionError,
    InsufficientWarmupError,
    InvalidArgumentError,
    SingularSystemError,
)
from src.experiments.orchestrator import approx_sweep, run, sweep_epsilon, tune
from src.numerics.kernels import KernelConfig

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_INGESTION = 3
EXIT_NUMERICAL = 4


def _choice(enum_cls):
    return click.Choice([member.value for member in enum_cls])


def _banner(title: str) -> None:
    click.echo(f"\n{'=' * 60}")
    click.echo(title)
    click.echo("=" * 60)


def guarded(command):
    """
    Maps package errors to the documented exit codes.
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except (ValidationError, ConfigError, InvalidArgumentError) as exc:
            click.echo(f"configuration error: {exc}", err=True)
            ctx.exit(EXIT_CONFIG)
        except (IngestionError, InsufficientWarmupError) as exc:
            click.echo(f"ingestion error: {exc}", err=True)
            ctx.exit(EXIT_INGESTION)
        except (DegenerateSpectrumError, SingularSystemError, BudgetViolationError) as exc:
            click.echo(f"numerical error: {exc}", err=True)
            ctx.exit(EXIT_NUMERICAL)

    return wrapper


def _parse_label_map(text: str | None) -> dict[float, float] | None:
    """
    Parses "raw:mapped,raw:mapped", e.g. "0:-1,1:1".
    """
    if not text:
        return None
    mapping = {}
    try:
        for pair in text.split(","):
            raw, mapped = pair.split(":")
            mapping[float(raw)] = float(mapped)
    except ValueError as exc:
        raise ConfigError(f"cannot parse label map {text!r}") from exc
    return mapping


def _resolve_data(path: str) -> Path:
    candidate = Path(path)
    if candidate.exists() or candidate.is_absolute():
        return candidate
    return get_settings().data_dir / candidate


def data_options(command):
    options = [
        click.option("--data", "data_path", required=True, help="LIBSVM file, relative paths fall back to DATA_DIR"),
        click.option("--dim", type=int, default=None, help="Feature dimension, inferred when omitted"),
        click.option("--task", type=_choice(Task), default=Task.CLASSIFICATION.value),
        click.option("--label-map", default=None, help='Raw to +-1 label mapping, e.g. "0:-1,1:1"'),
        click.option("--output-dir", type=click.Path(path_type=Path), default=None),
        click.option("--n-jobs", type=int, default=None),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def run_options(command):
    options = [
        click.option("--method", type=_choice(Method), default=Method.NOLANA.value),
        click.option("--loss", type=_choice(LossKind), default=LossKind.HINGE.value),
        click.option("--m", "m", type=int, default=100, help="Number of landmarks"),
        click.option("--r", "r", type=int, default=None, help="Rank, round(r_ratio * m) when omitted"),
        click.option("--r-ratio", type=float, default=0.8),
        click.option("--epsilon", type=float, default=0.0, help="Landmark gate; inf disables updates"),
        click.option("--eta", type=float, default=0.1),
        click.option("--lambda", "lam", type=float, default=0.0),
        click.option("--theta", type=float, default=1e-3),
        click.option("--gamma", type=float, default=1.0),
        click.option("--p", "p", type=int, default=3, help="Power iterations per refresh"),
        click.option("--seed", type=int, default=0),
        click.option("--shuffles", type=int, default=5),
        click.option("--eta-schedule", type=_choice(EtaSchedule), default=EtaSchedule.CONSTANT.value),
        click.option("--stage-one-steps", type=int, default=1),
        click.option("--stage-one-map", type=_choice(StageOneMap), default=StageOneMap.PRE.value, help="Embedding used to fit x after a landmark move"),
        click.option("--realign/--no-realign", default=True),
        click.option("--eig-solver", type=_choice(EigSolver), default=EigSolver.WARMSTART.value),
        click.option("--rel-tol", type=float, default=1e-6),
        click.option("--landmark-init", type=_choice(LandmarkInit), default=LandmarkInit.FIRST.value),
        click.option("--warmup-size", type=int, default=None),
        click.option("--scale/--no-scale", default=False),
        click.option("--aggressiveness", type=float, default=math.inf),
        click.option("--eps-insensitive", type=float, default=0.0),
        click.option("--timing/--no-timing", default=False),
        click.option("--progress/--no-progress", default=False),
        click.option("--audit/--no-audit", default=False, help="Check every step that the stored-real counts stay fixed"),
        click.option("--checkpoint-every", type=int, default=None),
        click.option("--max-samples", type=int, default=None, help="Seeded subsample of the dataset, e.g. 100000 for covtype"),
    ]
    for option in reversed(options):
        command = option(command)
    return data_options(command)


def build_config(data_path, dim, task, label_map, output_dir, n_jobs, **fields) -> RunConfig:
    """
    Validates command-line values into a RunConfig before any data is read.
    """
    settings = get_settings()
    spec = StreamSpec(
        path=_resolve_data(data_path),
        dim=dim,
        task=Task(task),
        label_map=_parse_label_map(label_map),
    )
    return RunConfig(
        data=spec,
        output_dir=output_dir or settings.output_dir,
        n_jobs=n_jobs or settings.n_jobs,
        **fields,
    )


@click.group()
@click.option("--log-level", default=None, help="Overrides LOG_LEVEL")
@click.pass_context
def cli(ctx, log_level):
    """
    Online kernel learning under a fixed memory budget.
    """
    logging.basicConfig(
        level=(log_level or get_settings().log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    ctx.call_on_close(tracing.flush)


@cli.command("run")
@run_options
@click.option("--resume", is_flag=True, help="Continue passes from their checkpoints")
@guarded
def run_command(resume, **params):
    """
    Seeded prequential passes with per-pass CSVs, summary and manifest.
    """
    config = build_config(**params)
    _banner(f"RUN {config.method.value} on {config.data.path}")
    summary = run(config, resume=resume)
    click.echo(f"{summary['metric']}: {summary['mean']:.6f} +- {summary['std']:.6f}")
    click.echo(f"budget: {summary['budget']['budget']} reals")
    click.echo(f"artifacts: {config.output_dir}")
    click.echo("=" * 60)


@cli.command("sweep-eps")
@run_options
@click.option("--eps", "epsilons", type=float, multiple=True, required=True)
@guarded
def sweep_command(epsilons, **params):
    """
    One run per epsilon, tabulating the metric and landmark update counts.
    """
    config = build_config(**params)
    _banner(f"EPSILON SWEEP {config.method.value} on {config.data.path}")
    for row in sweep_epsilon(config, epsilons):
        click.echo(
            f"eps={row['epsilon']:<10g} metric={row['metric']:.6f} updates={row['updates']:.1f}"
        )
    click.echo("=" * 60)


@cli.command("tune")
@run_options
@click.option("--grid-gamma", type=float, multiple=True)
@click.option("--grid-eta", type=float, multiple=True)
@click.option("--grid-epsilon", type=float, multiple=True)
@click.option("--fraction", type=float, default=0.2, help="Share of the seeded stream to tune on")
@guarded
def tune_command(grid_gamma, grid_eta, grid_epsilon, fraction, **params):
    """
    Grid search over gamma, eta and epsilon on a prefix of the stream.
    """
    config = build_config(**params)
    grid = {
        "gamma": list(grid_gamma) or [config.gamma],
        "eta": list(grid_eta) or [config.eta],
        "epsilon": list(grid_epsilon) or [config.epsilon],
    }
    _banner(f"TUNE {config.method.value} on {config.data.path}")
    document = tune(config, grid, fraction=fraction)
    click.echo(f"best: {document['best']}")
    click.echo("=" * 60)


@cli.command("approx")
@data_options
@click.option("--gamma", type=float, default=1.0)
@click.option("--m", "ms", type=int, multiple=True, help="Landmark counts, default 20 50 100 200")
@click.option("--seeds", type=int, default=3)
@click.option("--method", "methods", type=_choice(ApproxMethod), multiple=True)
@click.option("--r-ratio", type=float, default=0.8)
@click.option("--epsilon", type=float, default=0.0)
@click.option("--subset-size", type=int, default=10_000)
@click.option("--p", "p", type=int, default=3)
@click.option("--shuffle-seed", type=int, default=None)
@guarded
def approx_command(
    data_path, dim, task, label_map, output_dir, n_jobs,
    gamma, ms, seeds, methods, r_ratio, epsilon, subset_size, p, shuffle_seed,
):
    """
    Relative kernel approximation error of OANA, NOGD and FOGD at equal budget.
    """
    settings = get_settings()
    spec = StreamSpec(
        path=_resolve_data(data_path),
        dim=dim,
        task=Task(task),
        label_map=_parse_label_map(label_map),
        shuffle_seed=shuffle_seed,
    )
    kernel = KernelConfig(gamma=gamma)
    output_dir = output_dir or settings.output_dir
    _banner(f"APPROXIMATION ERROR on {spec.path}")
    rows = approx_sweep(
        build_stream(spec),
        output_dir,
        kernel,
        ms=ms or (20, 50, 100, 200),
        seeds=tuple(range(seeds)),
        methods=tuple(ApproxMethod(m) for m in methods) or tuple(ApproxMethod),
        r_ratio=r_ratio,
        epsilon=epsilon,
        subset_size=subset_size,
        power_iters=p,
        n_jobs=n_jobs or settings.n_jobs,
    )
    for row in rows:
        click.echo(f"{row['method']:<6} m={row['m']:<4} budget={row['budget']:<7} error={row['error']:.6f}")
    click.echo("=" * 60)


def main():
    cli()


if __name__ == "__main__":
    main()
