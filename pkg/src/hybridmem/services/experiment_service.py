"""Experiment orchestration: scheme sweeps and ablation grids"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from tqdm import tqdm

from ..models.experiment import ExperimentConfig, MigrateOn, ReplacementPolicy, SchemeId
from ..models.stats import SchemeStats
from ..models.trace import TraceRecord
from ..storage.repositories import ReportRepository, TraceRepository
from . import metrics
from .schemes import run as run_scheme
from .trace_service import gen_synthetic

logger = logging.getLogger(__name__)

NAMED_CELLS = {
    (0, None): 'NoH-noS',
    (0, 512): 'NoH-withS',
    (8, 512): 'H8-S',
    (16, 512): 'H16-S',
    (64, 512): 'H64-S',
    (16, 128): 'H-S128',
}


@dataclass(frozen=True)
class Cell:
    """One (scheme, config, seed) run of an experiment"""

    label: str
    scheme: SchemeId
    config: ExperimentConfig
    seed: int


def ablation_label(threshold: int, subblock: Optional[int], replacement: ReplacementPolicy,
                   migrate_on: MigrateOn, capacity: Optional[int] = None) -> str:
    if migrate_on is MigrateOn.WRITES_ONLY and (threshold, subblock) == (16, 512):
        label = 'Wr-only'
    else:
        label = NAMED_CELLS.get((threshold, subblock), f"H{threshold}-S{subblock or 'none'}")
        if migrate_on is MigrateOn.WRITES_ONLY:
            label += '-wr'
    if replacement is not ReplacementPolicy.RAPID_LRU:
        label += f"-{replacement.value}"
    if capacity is not None:
        label += f"-{capacity // 2**20}MB"
    return label


def _run_cell(cell: Cell, trace: Sequence[TraceRecord]) -> SchemeStats:
    stats = run_scheme(cell.scheme, trace, cell.config, seed=cell.seed, label=cell.label)
    if cell.config.verify:
        metrics.check_conservation(stats, cell.config)
    return stats


class ExperimentService:
    """Runs planned cells, PCM-base first, and writes reports"""

    def __init__(self, jobs: int = 1, show_progress: bool = False):
        self.jobs = max(1, jobs)
        self.show_progress = show_progress

    def load_trace(self, config: ExperimentConfig) -> List[TraceRecord]:
        source = config.trace
        if source.synthetic is not None:
            return gen_synthetic(source.synthetic)
        repository = TraceRepository('.', capacity=config.devices.pcm.capacity)
        return repository.load(source.path)

    def plan_run(self, config: ExperimentConfig) -> List[Cell]:
        ordered = sorted(config.schemes, key=lambda s: s is not SchemeId.PCM_BASE)
        return [Cell(scheme.value, scheme, config, seed) for scheme in ordered for seed in config.seeds]

    def plan_ablation(self, config: ExperimentConfig) -> List[Cell]:
        """PCM-base per seed, then the cross product of the ablation knob lists"""
        grid = config.ablation
        cells = [Cell(SchemeId.PCM_BASE.value, SchemeId.PCM_BASE, config, seed) for seed in config.seeds]
        capacities = grid.capacities or [None]
        for threshold, subblock, replacement, migrate_on, capacity in itertools.product(
                grid.thresholds, grid.subblocks, grid.replacements, grid.migrate_on, capacities):
            policy = config.policy.model_dump()
            policy.update(threshold=threshold, subblock_bytes=subblock,
                          replacement=replacement, migrate_on=migrate_on)
            changes = {'policy': policy}
            if capacity is not None:
                changes['migrantstore_capacity'] = capacity
            cell_config = config.with_updates(**changes)
            label = ablation_label(threshold, subblock, replacement, migrate_on, capacity)
            cells.extend(Cell(label, SchemeId.MIGRANTSTORE, cell_config, seed) for seed in config.seeds)
        return cells

    def execute(self, cells: Sequence[Cell], trace: Sequence[TraceRecord]) -> List[SchemeStats]:
        """Results come back in plan order regardless of worker scheduling"""
        baseline = [i for i, c in enumerate(cells) if c.scheme is SchemeId.PCM_BASE]
        others = [i for i, c in enumerate(cells) if c.scheme is not SchemeId.PCM_BASE]
        results: List[Optional[SchemeStats]] = [None] * len(cells)

        with tqdm(total=len(cells), desc='cells', disable=not self.show_progress) as progress:
            for i in baseline:
                results[i] = _run_cell(cells[i], trace)
                progress.update(1)

            if self.jobs > 1 and len(others) > 1:
                with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                    futures = {i: pool.submit(_run_cell, cells[i], trace) for i in others}
                    for i, future in futures.items():
                        results[i] = future.result()
                        progress.update(1)
            else:
                for i in others:
                    results[i] = _run_cell(cells[i], trace)
                    progress.update(1)
        return results

    def _report(self, name: str, stats: List[SchemeStats], config: ExperimentConfig,
                out_dir: Optional[str]) -> Path:
        report = metrics.emit_report(stats, config)
        repository = ReportRepository(out_dir or config.output_dir)
        return repository.save(name, report)

    def _cell_reports(self, cells: Sequence[Cell], stats: Sequence[SchemeStats],
                      out_dir: Optional[str]) -> List[Path]:
        """One report per ablation cell, next to its seed's PCM-base run and under the cell's own config"""
        baselines = {s.seed: s for cell, s in zip(cells, stats) if cell.scheme is SchemeId.PCM_BASE}
        return [
            self._report(f"cells/{cell.label}-seed{cell.seed}", [baselines[cell.seed], s], cell.config, out_dir)
            for cell, s in zip(cells, stats) if cell.scheme is not SchemeId.PCM_BASE
        ]

    def run_experiment(self, config: ExperimentConfig,
                       out_dir: Optional[str] = None) -> Tuple[List[SchemeStats], Path]:
        trace = self.load_trace(config)
        stats = self.execute(self.plan_run(config), trace)
        path = self._report('report', stats, config, out_dir)
        logger.info(f"Experiment finished: {len(stats)} runs, report at {path}")
        return stats, path

    def run_ablation(self, config: ExperimentConfig,
                     out_dir: Optional[str] = None) -> Tuple[List[SchemeStats], Path]:
        trace = self.load_trace(config)
        cells = self.plan_ablation(config)
        stats = self.execute(cells, trace)
        cell_paths = self._cell_reports(cells, stats, out_dir)
        path = self._report('ablation', stats, config, out_dir)
        logger.info(f"Ablation finished: {len(stats)} cells, report at {path}, {len(cell_paths)} cell reports")
        return stats, path
