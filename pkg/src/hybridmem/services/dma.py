"""Page-copy DMA engine shared by migrations, cache fills and OS copies"""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Deque, Dict, List, Optional, Tuple

from ..models.geometry import AccessKind
from ..models.trace import BLOCK_BYTES
from .devices import MemoryDevice
from .simulation import COMPLETION, DMA, Simulator

logger = logging.getLogger(__name__)

SUBBLOCK_WRITE_BYTES = 512


class Step(Enum):
    VICTIM_READ = 'victim_read'
    COPY = 'copy'
    FETCH = 'fetch'
    STORE = 'store'


@dataclass
class PageTransfer:
    """
    Move one page from a PCM frame into a DRAM frame.

    If the DRAM frame holds a victim it is read out block by block before being
    overwritten, and its dirty extents go to victim_pcm_base. With demand_first
    the whole demand page is fetched before the victim is touched.
    """

    label: str
    src: MemoryDevice
    src_base: int
    dst: MemoryDevice
    dst_base: int
    page_bytes: int
    has_victim: bool = False
    victim_pcm_base: Optional[int] = None
    victim_extents: List[Tuple[int, int]] = field(default_factory=list)
    demand_first: bool = False
    on_demand_read: Optional[Callable[[int], None]] = None
    on_complete: Optional[Callable[[int], None]] = None

    start_time: int = 0
    demand_read_done: int = 0
    done: int = 0
    victim_ready: int = 0
    steps: Deque[Tuple[Step, int]] = field(default_factory=deque)
    fetched: Dict[int, int] = field(default_factory=dict)
    pending_writes: Dict[int, List[Tuple[int, int]]] = field(default_factory=dict)

    def note(self, time: int) -> None:
        if time > self.done:
            self.done = time

    @property
    def elapsed(self) -> int:
        return self.done - self.start_time


def split_extents(extents: List[Tuple[int, int]], limit: int = SUBBLOCK_WRITE_BYTES) -> List[Tuple[int, int]]:
    """Break write extents into array writes of at most limit bytes"""
    pieces = []
    for offset, nbytes in extents:
        end = offset + nbytes
        while offset < end:
            size = min(limit, end - offset)
            pieces.append((offset, size))
            offset += size
    return pieces


class DmaEngine:
    """Issues one 64 B burst per bus slot; demand events at the same time go first"""

    def __init__(self, sim: Simulator, burst_cycles: int, flush_probe_cycles: int = 0):
        self.sim = sim
        self.slot = burst_cycles + flush_probe_cycles
        self.transfers_started = 0
        self.transfers_done = 0

    def _plan(self, transfer: PageTransfer) -> None:
        offsets = range(0, transfer.page_bytes, BLOCK_BYTES)
        steps = transfer.steps
        if transfer.demand_first:
            steps.extend((Step.FETCH, off) for off in offsets)
            for off in offsets:
                if transfer.has_victim:
                    steps.append((Step.VICTIM_READ, off))
                steps.append((Step.STORE, off))
        else:
            for off in offsets:
                if transfer.has_victim:
                    steps.append((Step.VICTIM_READ, off))
                steps.append((Step.COPY, off))

        # a dirty victim extent is written once its last block has been read
        for offset, nbytes in split_extents(transfer.victim_extents):
            last = offset + nbytes - BLOCK_BYTES
            transfer.pending_writes.setdefault(last, []).append((offset, nbytes))

    def start(self, transfer: PageTransfer, now: int) -> None:
        transfer.start_time = now
        transfer.done = now
        transfer.demand_read_done = now
        self._plan(transfer)
        self.transfers_started += 1
        logger.debug(f"DMA {transfer.label}: pcm {transfer.src_base:#x} -> dram {transfer.dst_base:#x} "
                     f"victim={transfer.has_victim} dirty_extents={len(transfer.victim_extents)}")
        self.sim.schedule(now, DMA, lambda t: self._step(transfer, t))

    def _step(self, transfer: PageTransfer, now: int) -> None:
        step, offset = transfer.steps.popleft()
        src, dst = transfer.src, transfer.dst

        if step is Step.VICTIM_READ:
            r = dst.access(AccessKind.READ, transfer.dst_base + offset, now)
            transfer.victim_ready = max(transfer.victim_ready, r.completion)
            transfer.note(r.completion)
            for sub_offset, nbytes in transfer.pending_writes.pop(offset, ()):
                w = src.access(AccessKind.WRITE_SUBBLOCK, transfer.victim_pcm_base + sub_offset,
                               transfer.victim_ready, nbytes=nbytes, transfer=False)
                transfer.note(w.completion)
        elif step is Step.COPY:
            r = src.access(AccessKind.READ, transfer.src_base + offset, now)
            transfer.demand_read_done = max(transfer.demand_read_done, r.completion)
            w = dst.access(AccessKind.WRITE, transfer.dst_base + offset, r.completion, transfer=False)
            transfer.note(w.completion)
        elif step is Step.FETCH:
            r = src.access(AccessKind.READ, transfer.src_base + offset, now)
            transfer.demand_read_done = max(transfer.demand_read_done, r.completion)
            transfer.fetched[offset] = r.completion
            transfer.note(r.completion)
        else:
            ready = max(now, transfer.fetched.pop(offset, now))
            w = dst.access(AccessKind.WRITE, transfer.dst_base + offset, ready)
            transfer.note(w.completion)

        if transfer.steps:
            if step is Step.FETCH and transfer.steps[0][0] is not Step.FETCH:
                self._demand_ready(transfer)
            self.sim.schedule(now + self.slot, DMA, lambda t: self._step(transfer, t))
            return

        if not transfer.demand_first:
            self._demand_ready(transfer)
        self.sim.schedule(transfer.done, COMPLETION, lambda t: self._finish(transfer, t))

    def _demand_ready(self, transfer: PageTransfer) -> None:
        if transfer.on_demand_read is not None:
            callback, transfer.on_demand_read = transfer.on_demand_read, None
            self.sim.schedule(transfer.demand_read_done, COMPLETION, callback)

    def _finish(self, transfer: PageTransfer, now: int) -> None:
        self.transfers_done += 1
        if transfer.on_complete is not None:
            transfer.on_complete(now)
