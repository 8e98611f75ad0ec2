"""Common scheme plumbing: devices, bus, DMA engine and stats collection"""
import logging
from collections import Counter
from abc import ABC, abstractmethod
from typing import Dict, List, Optional

from ...models.experiment import ExperimentConfig, SchemeId
from ...models.geometry import DeviceGeometry
from ...models.stats import EnergyLedger, SchemeStats, nj_to_pj
from ..devices import Bus, MemoryDevice, leakage_energy
from ..dma import DmaEngine
from ..simulation import Simulator

logger = logging.getLogger(__name__)


class Scheme(ABC):
    """One memory-system organization. Subclasses serve read misses and writebacks."""

    scheme_id: SchemeId

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        self.config = config
        self.seed = seed
        self.record_log = record_log
        self.cpu_per_mem_cycle = config.timing.cpu_per_mem_cycle
        self.bus = Bus(config.bus, self.cpu_per_mem_cycle)
        self.devices: Dict[str, MemoryDevice] = {}
        self.sim: Optional[Simulator] = None
        self.dma: Optional[DmaEngine] = None

        self.dram_hits = 0
        self.dram_misses = 0
        self.fills = 0
        self.sram_events: Counter = Counter()
        self.software_events = 0
        self.sram_leakage_mw = 0.0

    def add_device(self, geom: DeviceGeometry) -> MemoryDevice:
        device = MemoryDevice(geom, self.bus, self.cpu_per_mem_cycle, record_log=self.record_log)
        self.devices[geom.name] = device
        return device

    def charge_sram(self, energy_nj: float, count: int = 1) -> None:
        """SRAM dynamic energy, kept as event counts per unit energy"""
        self.sram_events[energy_nj] += count

    @property
    def pcm(self) -> Optional[MemoryDevice]:
        return next((d for d in self.devices.values() if d.geom.is_pcm), None)

    def bind(self, sim: Simulator) -> None:
        self.sim = sim
        self.dma = DmaEngine(sim, self.bus.transfer_cycles(64), self.config.policy.flush_probe_cycles)
        self.on_bind()

    def on_bind(self) -> None:
        """Hook for schemes that need the simulator (timers, controllers)"""

    @abstractmethod
    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        """Completion time, or None if the scheme resumes the core later"""

    @abstractmethod
    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        """Time the core may continue, or None if the scheme resumes it later"""

    def finalize(self) -> None:
        """Hook run after the event loop drains"""

    @property
    def migrations(self) -> int:
        return self.fills

    def migration_latencies(self) -> List[int]:
        return []

    def migration_log(self) -> list:
        return []

    def span(self, core_cycles: List[int]) -> int:
        horizon = max(core_cycles, default=0)
        for device in self.devices.values():
            horizon = max(horizon, device.drain_time)
        return max(horizon, self.bus.busy_until)

    def collect(self, sim: Simulator, core_cycles: List[int]) -> SchemeStats:
        span = self.span(core_cycles)
        cpu_hz = self.config.timing.cpu_hz
        ledger = EnergyLedger(
            sram_dynamic_pj=sum(n * nj_to_pj(e) for e, n in self.sram_events.items()),
            software_pj=self.software_events * nj_to_pj(self.config.policy.migration_software_energy_nj),
        )
        leakage_mw = {}
        for name, device in self.devices.items():
            if device.geom.is_pcm:
                ledger.pcm_dynamic_pj += device.dynamic_pj
            else:
                ledger.dram_dynamic_pj += device.dynamic_pj
            leakage_mw[name] = device.geom.leakage_mw
        if self.sram_leakage_mw:
            leakage_mw['sram'] = self.sram_leakage_mw
        ledger.leakage_nj = sum(leakage_energy(mw, span, cpu_hz) for mw in leakage_mw.values())

        pcm = self.pcm
        stats = SchemeStats(
            scheme=self.scheme_id,
            seed=self.seed,
            core_cycles=list(core_cycles),
            span_cycles=span,
            read_misses=sim.read_misses,
            writebacks=sim.writebacks,
            dram_misses=self.dram_misses,
            dram_hits=self.dram_hits,
            migrations_or_fills=self.migrations,
            busy_bank_cycles={name: d.busy_bank_cycles for name, d in self.devices.items()},
            energy=ledger,
            pcm_eviction_bytes=pcm.subblock_write_bytes if pcm else 0,
            pcm_direct_write_bytes=pcm.direct_write_bytes if pcm else 0,
            migration_latencies=self.migration_latencies(),
            migration_log=self.migration_log(),
            access_logs={name: d.access_counts.copy() for name, d in self.devices.items()},
            leakage_mw=leakage_mw,
            software_events=self.software_events,
            sram_events=dict(self.sram_events),
        )
        if pcm is not None and pcm.wear is not None:
            stats.wear = pcm.wear
        return stats
