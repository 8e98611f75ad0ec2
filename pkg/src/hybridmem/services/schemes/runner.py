"""Run one scheme over one trace"""
import logging
from typing import Dict, Sequence, Type

from ...models.experiment import ExperimentConfig, SchemeId
from ...models.stats import SchemeStats
from ...models.trace import TraceRecord
from ..exceptions import SchemeError
from ..simulation import Simulator
from .base import Scheme
from .direct import DramIdealScheme, PcmOnlyScheme
from .hw_cache import HwCacheParScheme, HwCacheSeqScheme
from .migrant import MigrantStoreScheme
from .os_quanta import OsQuantaCopyScheme
from .pcm_base import PcmBaseScheme
from .row_buffers import RowBufferScheme

logger = logging.getLogger(__name__)

SCHEME_REGISTRY: Dict[SchemeId, Type[Scheme]] = {
    SchemeId.PCM_ONLY: PcmOnlyScheme,
    SchemeId.DRAM_IDEAL: DramIdealScheme,
    SchemeId.PCM_BASE: PcmBaseScheme,
    SchemeId.HW_CACHE_SEQ: HwCacheSeqScheme,
    SchemeId.HW_CACHE_PAR: HwCacheParScheme,
    SchemeId.ROW_BUFFERS: RowBufferScheme,
    SchemeId.OS_QUANTA_COPY: OsQuantaCopyScheme,
    SchemeId.MIGRANTSTORE: MigrantStoreScheme,
}


def build_scheme(scheme_id, config: ExperimentConfig, seed: int = 0, record_log: bool = False) -> Scheme:
    try:
        scheme_id = SchemeId(scheme_id)
    except ValueError as e:
        raise SchemeError(f"Unknown scheme: {scheme_id}") from e
    return SCHEME_REGISTRY[scheme_id](config, seed, record_log)


def run(scheme_id, trace: Sequence[TraceRecord], config: ExperimentConfig, seed: int = 0,
        label: str = '', record_log: bool = False) -> SchemeStats:
    """Deterministic: the same (scheme, trace, config, seed) gives identical stats"""
    scheme = build_scheme(scheme_id, config, seed, record_log)
    logger.info(f"Running {scheme.scheme_id.value} over {len(trace)} records (seed {seed})")
    sim = Simulator(scheme, trace)
    core_cycles = sim.run()
    scheme.finalize()
    stats = scheme.collect(sim, core_cycles)
    stats.label = label or scheme.scheme_id.value
    logger.info(f"Finished {stats.label}: {stats.total_cycles} cycles, "
                f"{stats.migrations_or_fills} migrations/fills, miss rate {stats.dram_miss_rate:.4f}")
    return stats
