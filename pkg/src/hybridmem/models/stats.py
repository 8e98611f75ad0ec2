"""Run statistics: energy ledger, wear map and per-scheme results"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .experiment import SchemeId
from .trace import BLOCK_BYTES

PJ_PER_NJ = 1000


def nj_to_pj(value_nj: float) -> int:
    return int(round(value_nj * PJ_PER_NJ))


@dataclass
class EnergyLedger:
    """Energy accumulators. Dynamic and software parts are integer picojoules."""

    pcm_dynamic_pj: int = 0
    dram_dynamic_pj: int = 0
    sram_dynamic_pj: int = 0
    software_pj: int = 0
    leakage_nj: float = 0.0

    @property
    def pcm_dynamic(self) -> float:
        return self.pcm_dynamic_pj / PJ_PER_NJ

    @property
    def dram_dynamic(self) -> float:
        return self.dram_dynamic_pj / PJ_PER_NJ

    @property
    def sram_dynamic(self) -> float:
        return self.sram_dynamic_pj / PJ_PER_NJ

    @property
    def software(self) -> float:
        return self.software_pj / PJ_PER_NJ

    @property
    def leakage(self) -> float:
        return self.leakage_nj

    @property
    def dynamic_pj(self) -> int:
        return self.pcm_dynamic_pj + self.dram_dynamic_pj + self.sram_dynamic_pj + self.software_pj

    @property
    def total(self) -> float:
        return self.dynamic_pj / PJ_PER_NJ + self.leakage_nj

    def to_dict(self) -> Dict[str, float]:
        return {
            'pcm_dynamic_nj': self.pcm_dynamic,
            'dram_dynamic_nj': self.dram_dynamic,
            'sram_dynamic_nj': self.sram_dynamic,
            'leakage_nj': self.leakage_nj,
            'software_nj': self.software,
            'total_nj': self.total,
        }


@dataclass
class WearMap:
    """Sparse per-64B-block PCM write counters"""

    counts: Counter = field(default_factory=Counter)

    def record_write(self, addr: int, nbytes: int = BLOCK_BYTES) -> None:
        first = addr // BLOCK_BYTES
        for block in range(first, first + max(1, nbytes // BLOCK_BYTES)):
            self.counts[block] += 1

    @property
    def total_writes(self) -> int:
        return sum(self.counts.values())

    @property
    def touched_blocks(self) -> int:
        return len(self.counts)

    def __len__(self):
        return len(self.counts)


@dataclass
class SchemeStats:
    """Everything one scheme run reports"""

    scheme: SchemeId
    seed: int
    label: str = ''
    core_cycles: List[int] = field(default_factory=list)
    span_cycles: int = 0
    read_misses: int = 0
    writebacks: int = 0
    dram_misses: int = 0
    dram_hits: int = 0
    migrations_or_fills: int = 0
    busy_bank_cycles: Dict[str, int] = field(default_factory=dict)
    energy: EnergyLedger = field(default_factory=EnergyLedger)
    wear: WearMap = field(default_factory=WearMap)
    pcm_eviction_bytes: int = 0
    pcm_direct_write_bytes: int = 0
    migration_latencies: List[int] = field(default_factory=list)
    migration_log: List[Tuple[int, Optional[int]]] = field(default_factory=list)
    access_logs: Dict[str, Counter] = field(default_factory=dict)
    leakage_mw: Dict[str, float] = field(default_factory=dict)
    software_events: int = 0
    sram_events: Dict[float, int] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def total_cycles(self) -> int:
        return max(self.core_cycles, default=0)

    @property
    def l2_misses(self) -> int:
        return self.read_misses + self.writebacks

    @property
    def dram_miss_rate(self) -> float:
        if not self.l2_misses:
            return 0.0
        return self.dram_misses / self.l2_misses

    @property
    def migrations_per_l2_miss(self) -> float:
        if not self.l2_misses:
            return 0.0
        return self.migrations_or_fills / self.l2_misses

    @property
    def pcm_writeback_bytes(self) -> int:
        return self.pcm_eviction_bytes + self.pcm_direct_write_bytes

    @property
    def busy_bank_total(self) -> int:
        return sum(self.busy_bank_cycles.values())
