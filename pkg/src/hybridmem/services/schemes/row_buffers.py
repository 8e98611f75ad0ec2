"""PCM with several narrow row buffers per bank"""
from collections import OrderedDict
from typing import List, Optional, Tuple

from ...models.experiment import ExperimentConfig, SchemeId
from ...models.geometry import AccessKind
from ..devices import map_address, unmap_address
from .base import Scheme


class RowBufferScheme(Scheme):
    """
    Each PCM bank keeps `count` fully associative buffers of `bytes` bytes with
    LRU replacement. Buffer hits are row hits. A miss that evicts a dirty buffer
    writes it to the array before the array read.
    """

    scheme_id = SchemeId.ROW_BUFFERS

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        super().__init__(config, seed, record_log)
        self.pcm_device = self.add_device(config.devices.pcm)
        self.geom = config.devices.pcm
        self.count = config.row_buffers.count
        self.segment_bytes = config.row_buffers.bytes
        # per bank: segment key -> dirty flag, least recent first
        self.buffers: List['OrderedDict[Tuple[int, int], bool]'] = [
            OrderedDict() for _ in range(self.geom.num_banks)
        ]

    def _segment(self, addr: int) -> Tuple[int, Tuple[int, int]]:
        bank, row, column = map_address(addr, self.geom)
        return bank, (row, column // self.segment_bytes)

    def _segment_addr(self, bank: int, key: Tuple[int, int]) -> int:
        row, index = key
        return unmap_address(bank, row, index * self.segment_bytes, self.geom)

    def _segment_blocks(self, bank: int, key: Tuple[int, int]) -> List[int]:
        row, index = key
        first = index * self.segment_bytes
        return [unmap_address(bank, row, column, self.geom)
                for column in range(first, first + self.segment_bytes, self.geom.interleave)]

    def _allocate(self, bank: int, key: Tuple[int, int], now: int) -> int:
        """Make room for key; returns the admission stall of a dirty writeback"""
        buffers = self.buffers[bank]
        stall = 0
        if len(buffers) >= self.count:
            victim, dirty = buffers.popitem(last=False)
            if dirty:
                w = self.pcm_device.access(AccessKind.WRITE_SUBBLOCK, self._segment_addr(bank, victim), now,
                                           nbytes=self.segment_bytes, transfer=False, record_wear=False)
                for block_addr in self._segment_blocks(bank, victim):
                    self.pcm_device.wear.record_write(block_addr)
                stall = w.stall_since(now)
        buffers[key] = False
        return stall

    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        bank, key = self._segment(addr)
        buffers = self.buffers[bank]
        if key in buffers:
            self.dram_hits += 1
            buffers.move_to_end(key)
            return self.pcm_device.access(AccessKind.READ, addr, now, buffered=True).completion
        self.dram_misses += 1
        self._allocate(bank, key, now)
        return self.pcm_device.access(AccessKind.READ, addr, now, row_hit=False).completion

    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        bank, key = self._segment(addr)
        buffers = self.buffers[bank]
        stall = 0
        if key in buffers:
            self.dram_hits += 1
            buffers.move_to_end(key)
        else:
            self.dram_misses += 1
            stall = self._allocate(bank, key, now)
            self.pcm_device.access(AccessKind.READ, addr, now, row_hit=False, transfer=False)
        w = self.pcm_device.access(AccessKind.WRITE, addr, now, buffered=True)
        buffers[key] = True
        return now + max(stall, w.stall_since(now))
