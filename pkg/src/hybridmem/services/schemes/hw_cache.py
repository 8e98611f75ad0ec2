"""Page-block DRAM cache managed entirely in hardware"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from ...models.experiment import ExperimentConfig, SchemeId
from ...models.geometry import TagPolicy
from ..cache import SetAssociativeCache
from ..dma import PageTransfer
from .base import Scheme

logger = logging.getLogger(__name__)


@dataclass
class _Fill:
    transfer: PageTransfer
    data_ready: bool = False
    readers: List[Callable[[int], None]] = field(default_factory=list)
    writes: List[int] = field(default_factory=list)


class HwCacheScheme(Scheme):
    """
    16-way cache of 8 KB blocks in DRAM that fills on every miss.

    Tags are installed when a fill starts, but the PCM copy only begins once
    the tag check has reported the miss: sequential lookup pays the tag read
    alone, parallel lookup reads every way's data alongside the tags. A read miss
    stalls until the demand page has been read from PCM; victim read-out, dirty
    sub-block writeback and the DRAM store overlap with execution. Writeback
    misses allocate without stalling.
    """

    tag_policy = TagPolicy.SEQUENTIAL

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        super().__init__(config, seed, record_log)
        self.pcm_device = self.add_device(config.devices.pcm)
        geom = (config.devices.hw_cache_seq if self.tag_policy is TagPolicy.SEQUENTIAL
                else config.devices.hw_cache_par)
        self.dram = self.add_device(geom)
        self.cache = SetAssociativeCache(config.hw_cache.model_copy(update={'tag_policy': self.tag_policy}))
        self.page_bytes = config.hw_cache.block_bytes
        self.filling: Dict[int, _Fill] = {}
        self.hit_log: List[bool] = []

    def _dram_addr(self, set_index: int, way: int, offset: int) -> int:
        return self.cache.frame_index(set_index, way) * self.page_bytes + offset

    def _tag_check(self, set_index: int, way: int, offset: int, now: int) -> int:
        """Time at which a lookup started at now knows it missed"""
        if self.tag_policy is TagPolicy.PARALLEL:
            return self.dram.read(self._dram_addr(set_index, way, offset), now, transfer=False).device_done
        return now + self.cache.config.tag_latency * self.dram.cpu_per_mem_cycle

    def _start_fill(self, addr: int, set_index: int, way: int, now: int) -> _Fill:
        page_addr = addr - addr % self.page_bytes
        eviction = self.cache.fill(addr)
        extents = self.cache.subblock_extents(eviction.dirty_mask) if eviction is not None else []
        transfer = PageTransfer(
            label='fill',
            src=self.pcm_device,
            src_base=page_addr,
            dst=self.dram,
            dst_base=self._dram_addr(set_index, way, 0),
            page_bytes=self.page_bytes,
            has_victim=eviction is not None,
            victim_pcm_base=eviction.block_addr if eviction is not None else None,
            victim_extents=extents,
            demand_first=True,
        )
        fill = _Fill(transfer)
        transfer.on_demand_read = lambda t: self._data_ready(fill, t)
        transfer.on_complete = lambda t: self._fill_done(page_addr, fill, set_index, way, t)
        self.filling[page_addr] = fill
        self.fills += 1
        self.dma.start(transfer, self._tag_check(set_index, way, addr - page_addr, now))
        return fill

    def _data_ready(self, fill: _Fill, now: int) -> None:
        fill.data_ready = True
        readers, fill.readers = fill.readers, []
        for callback in readers:
            callback(now)

    def _fill_done(self, page_addr: int, fill: _Fill, set_index: int, way: int, now: int) -> None:
        if self.filling.get(page_addr) is not fill:
            return
        del self.filling[page_addr]
        # the frame may have been handed to another page while the copy ran
        if not self.cache.contains(page_addr):
            return
        for offset in fill.writes:
            self.dram.write(self._dram_addr(set_index, way, offset), now)

    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        result = self.cache.lookup(addr)
        self.hit_log.append(result.hit)
        offset = addr % self.page_bytes
        if not result.hit:
            self.dram_misses += 1
            fill = self._start_fill(addr, result.set_index, result.way, now)
            fill.readers.append(lambda t: self.sim.resume(core, t))
            return None

        self.dram_hits += 1
        dram_addr = self._dram_addr(result.set_index, result.way, offset)
        fill = self.filling.get(addr - offset)
        if fill is not None and not fill.data_ready:
            fill.readers.append(lambda t: self.sim.resume(core, self.dram.read(dram_addr, t).completion))
            return None
        return self.dram.read(dram_addr, now).completion

    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        result = self.cache.lookup(addr)
        self.hit_log.append(result.hit)
        offset = addr % self.page_bytes
        if not result.hit:
            self.dram_misses += 1
            fill = self._start_fill(addr, result.set_index, result.way, now)
            self.cache.write_hit(addr)
            fill.writes.append(offset)
            return now

        self.dram_hits += 1
        self.cache.write_hit(addr)
        fill = self.filling.get(addr - offset)
        if fill is not None:
            fill.writes.append(offset)
            return now
        return self.dram.write(self._dram_addr(result.set_index, result.way, offset), now).admitted


class HwCacheSeqScheme(HwCacheScheme):
    scheme_id = SchemeId.HW_CACHE_SEQ
    tag_policy = TagPolicy.SEQUENTIAL


class HwCacheParScheme(HwCacheScheme):
    scheme_id = SchemeId.HW_CACHE_PAR
    tag_policy = TagPolicy.PARALLEL
