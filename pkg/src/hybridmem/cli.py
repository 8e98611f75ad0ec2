"""Command-line interface: run, ablate and gen"""
import logging
import sys
from typing import Optional

import click

from .app import create_app
from .config import ExperimentConfigLoader
from .models.trace import GeneratorKind, SyntheticSpec
from .services.exceptions import (
    ConfigurationError,
    HybridMemError,
    InvariantViolation,
    SchemeError,
    TraceError,
)
from .services.experiment_service import ExperimentService
from .services.trace_service import gen_synthetic
from .storage.repositories import RepositoryError, TraceRepository

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TRACE = 2
EXIT_INVARIANT = 3


def exit_code_for(error: Exception) -> int:
    if isinstance(error, TraceError):
        return EXIT_TRACE
    if isinstance(error, InvariantViolation):
        return EXIT_INVARIANT
    if isinstance(error, (ConfigurationError, SchemeError, RepositoryError)):
        return EXIT_CONFIG
    return EXIT_INVARIANT


def _fail(error: HybridMemError) -> None:
    code = exit_code_for(error)
    logger.error(f"{type(error).__name__}: {error}")
    click.echo(f"error: {error}", err=True)
    sys.exit(code)


def _loader(ctx: click.Context) -> ExperimentConfigLoader:
    return ExperimentConfigLoader(ctx.obj.DEFAULTS_FILE_PATH)


def _load(ctx: click.Context, config_path: str, seed: Optional[int], out: Optional[str]):
    overrides = {}
    if seed is not None:
        overrides['seeds'] = [seed]
    if out is not None:
        overrides['output_dir'] = out
    return _loader(ctx).load(config_path, overrides or None)


@click.group()
@click.option('--env', 'env', default=None, help='Runtime profile (development, production, testing).')
@click.pass_context
def cli(ctx: click.Context, env: Optional[str]):
    """Hybrid DRAM-PCM memory simulator."""
    try:
        ctx.obj = create_app(env)
    except ConfigurationError as e:
        _fail(e)


def _service(ctx: click.Context, jobs: Optional[int]) -> ExperimentService:
    runtime = ctx.obj
    return ExperimentService(jobs=jobs or runtime.DEFAULT_JOBS, show_progress=runtime.SHOW_PROGRESS)


@cli.command()
@click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False))
@click.option('--out', default=None, help='Output directory (overrides output_dir).')
@click.option('--seed', default=None, type=click.IntRange(0, 2**64 - 1))
@click.option('--jobs', default=None, type=click.IntRange(1))
@click.pass_context
def run(ctx, config_path, out, seed, jobs):
    """Run the configured schemes; PCM-base first."""
    try:
        config = _load(ctx, config_path, seed, out)
        _, path = _service(ctx, jobs).run_experiment(config)
    except HybridMemError as e:
        _fail(e)
    click.echo(f"report written to {path.parent}")


@cli.command()
@click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False))
@click.option('--out', default=None)
@click.option('--seed', default=None, type=click.IntRange(0, 2**64 - 1))
@click.option('--jobs', default=None, type=click.IntRange(1))
@click.pass_context
def ablate(ctx, config_path, out, seed, jobs):
    """Run the MigrantStore ablation grid."""
    try:
        config = _load(ctx, config_path, seed, out)
        _, path = _service(ctx, jobs).run_ablation(config)
    except HybridMemError as e:
        _fail(e)
    click.echo(f"ablation report written to {path.parent}")


@cli.command()
@click.option('--config', 'config_path', default=None, type=click.Path(dir_okay=False),
              help='Experiment config whose trace.synthetic is generated.')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Trace file to write.')
@click.option('--generator', type=click.Choice([g.value for g in GeneratorKind]), default=None)
@click.option('--records', type=click.IntRange(0), default=None)
@click.option('--footprint', 'footprint_pages', type=click.IntRange(1), default=None)
@click.option('--exponent', 'zipf_exponent', type=click.FloatRange(0.0), default=None)
@click.option('--write-fraction', type=click.FloatRange(0.0, 1.0), default=None)
@click.option('--cores', 'num_cores', type=click.IntRange(1), default=None)
@click.option('--gap', 'gap_cycles', type=click.IntRange(1), default=None)
@click.option('--seed', type=click.IntRange(0, 2**64 - 1), default=None)
@click.pass_context
def gen(ctx, config_path, out, **flags):
    """Write a synthetic trace in the text trace format."""
    try:
        base = {}
        if config_path:
            config = _loader(ctx).load(config_path)
            if config.trace.synthetic is None:
                raise ConfigurationError("config has no trace.synthetic section")
            base = config.trace.synthetic.model_dump()
        base.update({k: v for k, v in flags.items() if v is not None})
        try:
            spec = SyntheticSpec.model_validate(base)
        except ValueError as e:
            raise ConfigurationError(f"Invalid synthetic spec: {e}") from e
        path = TraceRepository('.').save(out, gen_synthetic(spec))
    except HybridMemError as e:
        _fail(e)
    click.echo(f"wrote {spec.records} records to {path}")


def main() -> None:
    cli(prog_name='hybridmem')
