"""PCM behind an area-equivalent SRAM L3"""
from typing import Optional, Tuple

from ...models.experiment import ExperimentConfig, SchemeId
from ..cache import SetAssociativeCache
from .base import Scheme


class PcmBaseScheme(Scheme):
    """
    Write-allocate L3 with 64 B dirty tracking. An L3 miss reads the whole block
    from PCM and stalls a read until every burst has arrived; dirty 64 B pieces
    of the evicted block are written back in the background.
    """

    scheme_id = SchemeId.PCM_BASE

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        super().__init__(config, seed, record_log)
        self.pcm_device = self.add_device(config.devices.pcm)
        self.l3 = SetAssociativeCache(config.l3)
        self.hit_cycles = config.l3.hit_latency * self.cpu_per_mem_cycle
        self.access_nj = config.l3.access_energy_nj
        self.sram_leakage_mw = config.l3.leakage_mw

    def _fill(self, addr: int, now: int) -> Tuple[int, int]:
        """Bring addr's block into the L3; returns (data arrival, admission stall)"""
        block_bytes = self.l3.block_bytes
        base = addr - addr % block_bytes
        eviction = self.l3.fill(addr)
        self.charge_sram(self.access_nj)
        self.fills += 1

        arrival = now
        stall = 0
        for offset in range(0, block_bytes, 64):
            r = self.pcm_device.read(base + offset, now)
            arrival = max(arrival, r.completion)
            stall = max(stall, r.stall_since(now))
        if eviction is not None and eviction.dirty_mask:
            for offset, _ in self.l3.subblock_extents(eviction.dirty_mask):
                w = self.pcm_device.write(eviction.block_addr + offset, now)
                stall = max(stall, w.stall_since(now))
        return arrival, stall

    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        self.charge_sram(self.access_nj)
        if self.l3.lookup(addr).hit:
            self.dram_hits += 1
            return now + self.hit_cycles
        self.dram_misses += 1
        arrival, _ = self._fill(addr, now + self.hit_cycles)
        return arrival

    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        self.charge_sram(self.access_nj)
        if self.l3.lookup(addr).hit:
            self.dram_hits += 1
            self.l3.write_hit(addr)
            return now
        self.dram_misses += 1
        _, stall = self._fill(addr, now + self.hit_cycles)
        self.l3.write_hit(addr)
        return now + stall
