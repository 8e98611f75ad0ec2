"""Copy frequently written pages into DRAM at the end of each OS quantum"""
import logging
from collections import Counter, OrderedDict, deque
from typing import Deque, List, Optional

from ...models.experiment import ExperimentConfig, SchemeId
from ..dma import PageTransfer
from ..simulation import DEMAND
from .base import Scheme

logger = logging.getLogger(__name__)


class OsQuantaCopyScheme(Scheme):
    """
    Pages written at least write_threshold times during a quantum are copied to
    DRAM when the quantum ends, most-written first. Residents are evicted LRU; a
    dirty resident writes the whole page back. No software overhead is charged.
    """

    scheme_id = SchemeId.OS_QUANTA_COPY

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        super().__init__(config, seed, record_log)
        self.settings = config.os_quanta
        self.page_bytes = config.page_bytes
        self.pcm_device = self.add_device(config.devices.pcm)
        self.dram = self.add_device(config.migrant_dram_geometry(self.settings.capacity))
        self.capacity_pages = self.settings.capacity // self.page_bytes
        self.free_frames: Deque[int] = deque(range(self.capacity_pages))
        # page -> [frame, dirty], least recent first
        self.resident: 'OrderedDict[int, list]' = OrderedDict()
        self.copying = set()
        self.write_counts: Counter = Counter()
        self.quanta = 0
        self.copy_log: List[List[int]] = []

    def on_bind(self) -> None:
        self._schedule_quantum(self.settings.quantum_cycles)

    def _schedule_quantum(self, time: int) -> None:
        self.sim.schedule(time, DEMAND, self._on_quantum, tiebreak=-1)

    def _on_quantum(self, now: int) -> None:
        if not self.sim.active_cores():
            return
        self.quantum_end(now)
        self._schedule_quantum(now + self.settings.quantum_cycles)

    def quantum_end(self, now: int) -> List[int]:
        """Start copies for this quantum's hot-written pages; resets the counts"""
        self.quanta += 1
        hot = sorted(
            (page for page, count in self.write_counts.items()
             if count >= self.settings.write_threshold
             and page not in self.resident and page not in self.copying),
            key=lambda page: (-self.write_counts[page], page),
        )
        self.write_counts.clear()

        copied = []
        for page in hot[:self.capacity_pages]:
            if not self._start_copy(page, now):
                break
            copied.append(page)
        self.copy_log.append(copied)
        if copied:
            logger.debug(f"quantum {self.quanta}: copying {len(copied)} pages")
        return copied

    def _start_copy(self, page: int, now: int) -> bool:
        victim = None
        extents = []
        if self.free_frames:
            frame = self.free_frames.popleft()
        elif self.resident:
            victim, (frame, dirty) = self.resident.popitem(last=False)
            if dirty:
                extents = [(0, self.page_bytes)]
        else:
            return False

        transfer = PageTransfer(
            label='os_copy',
            src=self.pcm_device,
            src_base=page * self.page_bytes,
            dst=self.dram,
            dst_base=frame * self.page_bytes,
            page_bytes=self.page_bytes,
            has_victim=victim is not None,
            victim_pcm_base=victim * self.page_bytes if victim is not None else None,
            victim_extents=extents,
        )
        transfer.on_complete = lambda t: self._copy_done(page, frame)
        self.copying.add(page)
        self.fills += 1
        self.dma.start(transfer, now)
        return True

    def _copy_done(self, page: int, frame: int) -> None:
        self.copying.discard(page)
        self.resident[page] = [frame, False]

    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        page, offset = divmod(addr, self.page_bytes)
        entry = self.resident.get(page)
        if entry is not None:
            self.dram_hits += 1
            self.resident.move_to_end(page)
            return self.dram.read(entry[0] * self.page_bytes + offset, now).completion
        self.dram_misses += 1
        return self.pcm_device.read(addr, now).completion

    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        page, offset = divmod(addr, self.page_bytes)
        entry = self.resident.get(page)
        if entry is not None:
            self.dram_hits += 1
            self.resident.move_to_end(page)
            entry[1] = True
            return self.dram.write(entry[0] * self.page_bytes + offset, now).admitted
        self.dram_misses += 1
        self.write_counts[page] += 1
        return self.pcm_device.write(addr, now).admitted
