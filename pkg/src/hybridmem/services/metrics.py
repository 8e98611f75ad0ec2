"""Wear, lifetime, occupancy and report assembly"""
import csv
import io
import logging
import math
from collections import Counter
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..models.experiment import ExperimentConfig, SchemeId
from ..models.geometry import AccessKind, DeviceGeometry
from ..models.stats import EnergyLedger, SchemeStats, WearMap, nj_to_pj
from .devices import access_energy, leakage_energy
from .exceptions import EmptyWearMapError, InvariantViolation, MetricsError, NormalizationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1.0'
SECONDS_PER_YEAR = 3.156e7

CSV_COLUMNS = [
    'label', 'scheme', 'seed', 'total_cycles', 'span_cycles', 'read_misses', 'writebacks',
    'l2_misses', 'dram_misses', 'dram_miss_rate', 'migrations_or_fills', 'migrations_per_l2_miss',
    'busy_bank_cycles', 'busy_bank_avg', 'pcm_dynamic_nj', 'dram_dynamic_nj', 'sram_dynamic_nj',
    'leakage_nj', 'software_nj', 'total_energy_nj', 'pcm_eviction_bytes', 'pcm_direct_write_bytes',
    'pcm_writeback_bytes', 'wear_touched_blocks', 'wear_total_writes', 'max_writes',
    'lifetime_years', 'normalized_perf', 'normalized_energy',
]


def wear_cdf(wear: WearMap) -> List[Tuple[int, float]]:
    """(writes, cumulative fraction of touched blocks) at each distinct write count"""
    if not wear.counts:
        raise EmptyWearMapError("wear map has no touched blocks")
    histogram = Counter(wear.counts.values())
    total = len(wear.counts)
    points = []
    running = 0
    for writes in sorted(histogram):
        running += histogram[writes]
        points.append((writes, running / total))
    return points


def quantile_writes(wear: WearMap, quantile: float = 0.9999) -> int:
    """Write count not exceeded by the given fraction of touched blocks"""
    if not wear.counts:
        return 0
    counts = sorted(wear.counts.values())
    index = max(0, math.ceil(quantile * len(counts)) - 1)
    return counts[min(index, len(counts) - 1)]


def worst_case_lifetime(wear: WearMap, base_exec_cycles: int, cpu_hz: float, endurance: float,
                        quantile: float = 0.9999,
                        seconds_per_year: float = SECONDS_PER_YEAR) -> Tuple[int, float]:
    """
    Years until the quantile-worst block wears out, with the write rate taken over
    the baseline's execution time.

    Returns (max_writes, years); no writes gives an infinite lifetime.
    """
    max_writes = quantile_writes(wear, quantile)
    if max_writes == 0:
        return 0, math.inf
    if endurance == 0:
        return max_writes, 0.0
    if base_exec_cycles <= 0 or cpu_hz <= 0:
        raise MetricsError("lifetime needs a positive baseline execution time")
    write_rate = max_writes / (base_exec_cycles / cpu_hz)
    return max_writes, endurance / write_rate / seconds_per_year


def busy_bank_average(busy_cycles: Union[int, Mapping[str, int], Iterable[int]], base_exec_cycles: int) -> float:
    """Average number of busy banks per baseline cycle"""
    if base_exec_cycles <= 0:
        raise MetricsError("busy-bank average needs a positive baseline execution time")
    if isinstance(busy_cycles, int):
        total = busy_cycles
    elif isinstance(busy_cycles, Mapping):
        total = sum(busy_cycles.values())
    else:
        total = sum(busy_cycles)
    return total / base_exec_cycles


def _device_geometry(config: ExperimentConfig, name: str) -> DeviceGeometry:
    geom = getattr(config.devices, name, None)
    if geom is None:
        raise MetricsError(f"no geometry for device {name}")
    return geom


def replay_ledger(stats: SchemeStats, config: ExperimentConfig) -> EnergyLedger:
    """Recompute the energy ledger from the access logs, leakage and event counts"""
    ledger = EnergyLedger()
    for name, counts in stats.access_logs.items():
        geom = _device_geometry(config, name)
        pj = sum(n * nj_to_pj(access_energy(geom, AccessKind(kind), hit, nbytes))
                 for (kind, hit, nbytes), n in counts.items())
        if geom.is_pcm:
            ledger.pcm_dynamic_pj += pj
        else:
            ledger.dram_dynamic_pj += pj
    ledger.sram_dynamic_pj = sum(n * nj_to_pj(e) for e, n in stats.sram_events.items())
    ledger.software_pj = stats.software_events * nj_to_pj(config.policy.migration_software_energy_nj)
    ledger.leakage_nj = sum(leakage_energy(mw, stats.span_cycles, config.timing.cpu_hz)
                            for mw in stats.leakage_mw.values())
    return ledger


def check_conservation(stats: SchemeStats, config: ExperimentConfig) -> None:
    replayed = replay_ledger(stats, config)
    if replayed != stats.energy:
        raise InvariantViolation(f"{stats.label}: energy ledger {stats.energy} != replay {replayed}")


def _fmt(value: Any) -> Any:
    """Six significant digits for floats; infinities become 'inf'"""
    if isinstance(value, float):
        if math.isinf(value):
            return 'inf'
        if math.isnan(value):
            return 'nan'
        return float(f"{value:.6g}")
    return value


def _csv_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _baselines(stats: Sequence[SchemeStats]) -> Dict[int, SchemeStats]:
    return {s.seed: s for s in stats if s.scheme is SchemeId.PCM_BASE}


def normalize(stats: SchemeStats, base: Optional[SchemeStats]) -> Tuple[float, float]:
    """(performance, energy) relative to the PCM-base run; higher perf is better"""
    if base is None:
        raise NormalizationError(f"no pcm_base run for seed {stats.seed}")
    perf = base.total_cycles / stats.total_cycles if stats.total_cycles else math.inf
    energy = stats.energy.total / base.energy.total if base.energy.total else math.inf
    return perf, energy


def build_row(stats: SchemeStats, base: Optional[SchemeStats], config: ExperimentConfig) -> Dict[str, Any]:
    energy = stats.energy
    row: Dict[str, Any] = {
        'label': stats.label,
        'scheme': stats.scheme.value,
        'seed': stats.seed,
        'total_cycles': stats.total_cycles,
        'span_cycles': stats.span_cycles,
        'read_misses': stats.read_misses,
        'writebacks': stats.writebacks,
        'l2_misses': stats.l2_misses,
        'dram_misses': stats.dram_misses,
        'dram_miss_rate': stats.dram_miss_rate,
        'migrations_or_fills': stats.migrations_or_fills,
        'migrations_per_l2_miss': stats.migrations_per_l2_miss,
        'busy_bank_cycles': stats.busy_bank_total,
        'busy_bank_avg': None,
        'pcm_dynamic_nj': energy.pcm_dynamic,
        'dram_dynamic_nj': energy.dram_dynamic,
        'sram_dynamic_nj': energy.sram_dynamic,
        'leakage_nj': energy.leakage,
        'software_nj': energy.software,
        'total_energy_nj': energy.total,
        'pcm_eviction_bytes': stats.pcm_eviction_bytes,
        'pcm_direct_write_bytes': stats.pcm_direct_write_bytes,
        'pcm_writeback_bytes': stats.pcm_writeback_bytes,
        'wear_touched_blocks': stats.wear.touched_blocks,
        'wear_total_writes': stats.wear.total_writes,
        'max_writes': quantile_writes(stats.wear, config.lifetime.quantile),
        'lifetime_years': None,
        'normalized_perf': None,
        'normalized_energy': None,
    }
    if base is not None and base.total_cycles > 0:
        lifetime = config.lifetime
        row['busy_bank_avg'] = busy_bank_average(stats.busy_bank_total, base.total_cycles)
        _, row['lifetime_years'] = worst_case_lifetime(
            stats.wear, base.total_cycles, config.timing.cpu_hz, lifetime.endurance,
            lifetime.quantile, lifetime.seconds_per_year)
        row['normalized_perf'], row['normalized_energy'] = normalize(stats, base)
    return row


def emit_report(stats: Sequence[SchemeStats], config: ExperimentConfig) -> Tuple[str, Dict[str, Any]]:
    """
    Assemble the CSV text and JSON document for a set of runs.

    Rows are normalized against the PCM-base run with the same seed. Runs with no
    such baseline keep absolute values only and the report carries a warning.
    """
    baselines = _baselines(stats)
    warnings = []
    rows = []
    for s in stats:
        base = baselines.get(s.seed)
        try:
            normalize(s, base)
        except NormalizationError as e:
            message = f"{s.label}: {e}; reporting absolute values only"
            if message not in warnings:
                warnings.append(message)
                logger.warning(message)
        rows.append(build_row(s, base, config))

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_csv_cell(_fmt(row[column])) for column in CSV_COLUMNS])

    document = {
        'schema_version': SCHEMA_VERSION,
        'normalized': not warnings,
        'warnings': warnings,
        'columns': CSV_COLUMNS,
        'config': config.model_dump(mode='json'),
        'rows': [
            {**{k: _fmt(v) for k, v in row.items()},
             'busy_bank_cycles_by_device': dict(sorted(s.busy_bank_cycles.items()))}
            for row, s in zip(rows, stats)
        ],
    }
    return buffer.getvalue(), document


def validate_report(document: Mapping[str, Any]) -> List[str]:
    """Check a JSON report against the documented schema; returns problems found"""
    problems = []
    if document.get('schema_version') != SCHEMA_VERSION:
        problems.append(f"schema_version must be {SCHEMA_VERSION}")
    for key in ('normalized', 'warnings', 'columns', 'config', 'rows'):
        if key not in document:
            problems.append(f"missing key {key}")
    for index, row in enumerate(document.get('rows', [])):
        missing = [c for c in CSV_COLUMNS if c not in row]
        if missing:
            problems.append(f"row {index} missing {missing}")
    return problems
