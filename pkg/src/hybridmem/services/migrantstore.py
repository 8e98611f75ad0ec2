"""MigrantStore: hysteresis-gated page migration into an OS-managed DRAM region"""
import logging
from collections import OrderedDict, deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Deque, Dict, Iterator, List, Optional, Set, Tuple

import numpy as np

from ..models.experiment import MigrateOn, PolicyConfig, ReplacementPolicy
from .devices import MemoryDevice
from .dma import DmaEngine, PageTransfer
from .exceptions import InvariantViolation
from .simulation import Simulator

logger = logging.getLogger(__name__)


class Location(str, Enum):
    IN_PCM = 'in_pcm'
    IN_MIGRANTSTORE = 'in_migrantstore'


@dataclass(slots=True)
class PageTableEntry:
    """
    One page's placement. shared_field holds the hysteresis count while the page
    is in PCM and the sub-block dirty mask while it is in MigrantStore.
    """

    vpage: int
    pcm_frame: int
    location: Location = Location.IN_PCM
    dram_frame: Optional[int] = None
    shared_field: int = 0
    in_transit: bool = False

    @property
    def resident(self) -> bool:
        return self.location is Location.IN_MIGRANTSTORE

    @property
    def hysteresis_count(self) -> int:
        if self.resident:
            raise InvariantViolation(f"page {self.vpage}: hysteresis count read while in MigrantStore")
        return self.shared_field

    @property
    def subblock_dirty_mask(self) -> int:
        if not self.resident:
            raise InvariantViolation(f"page {self.vpage}: dirty mask read while in PCM")
        return self.shared_field


class PageTable:
    """Lazily populated; a page's PCM frame is its page number"""

    def __init__(self):
        self._entries: Dict[int, PageTableEntry] = {}

    def entry(self, vpage: int) -> PageTableEntry:
        pte = self._entries.get(vpage)
        if pte is None:
            pte = self._entries[vpage] = PageTableEntry(vpage, vpage)
        return pte

    def __getitem__(self, vpage: int) -> PageTableEntry:
        return self._entries[vpage]

    def __contains__(self, vpage: int) -> bool:
        return vpage in self._entries

    def __iter__(self) -> Iterator[PageTableEntry]:
        return iter(self._entries.values())

    def __len__(self):
        return len(self._entries)


class RapidBuffer:
    """Recently-accessed page ids since the last migration; oldest entry overwritten when full"""

    def __init__(self, capacity: int = 20):
        self.capacity = capacity
        self._pages: 'OrderedDict[int, None]' = OrderedDict()
        self.inserts = 0

    def insert(self, page: int) -> None:
        self.inserts += 1
        pages = self._pages
        if page in pages:
            pages.move_to_end(page)
            return
        if len(pages) >= self.capacity:
            pages.popitem(last=False)
        pages[page] = None

    def drain(self) -> List[int]:
        """Buffered pages oldest first; empties the buffer"""
        pages = list(self._pages)
        self._pages.clear()
        return pages

    def __iter__(self):
        return iter(self._pages)

    def __len__(self):
        return len(self._pages)


class LruStack:
    """Resident pages; as_list() is most recent first and the victim is the last element"""

    def __init__(self, pages: Optional[List[int]] = None):
        self._pages: 'OrderedDict[int, None]' = OrderedDict()
        for page in reversed(pages or []):
            self._pages[page] = None

    def push_front(self, page: int) -> None:
        pages = self._pages
        if page in pages:
            pages.move_to_end(page)
        else:
            pages[page] = None

    def remove(self, page: int) -> None:
        del self._pages[page]

    def victim(self) -> int:
        return next(iter(self._pages))

    def as_list(self) -> List[int]:
        return list(reversed(self._pages))

    def __contains__(self, page: int) -> bool:
        return page in self._pages

    def __len__(self):
        return len(self._pages)


class StaleSet:
    """PCM frames whose pages currently live in MigrantStore"""

    def __init__(self):
        self._frames: Set[int] = set()

    def add(self, frame: int) -> None:
        if frame in self._frames:
            raise InvariantViolation(f"PCM frame {frame} already stale")
        self._frames.add(frame)

    def remove(self, frame: int) -> None:
        self._frames.remove(frame)

    def __contains__(self, frame: int) -> bool:
        return frame in self._frames

    def __len__(self):
        return len(self._frames)


def update_lru_from_rapid(rapid: RapidBuffer, stack: LruStack) -> None:
    """Move buffered resident pages to the stack front, oldest first"""
    for page in rapid.drain():
        if page in stack:
            stack.push_front(page)


def select_victim(policy: ReplacementPolicy, stack: LruStack, rng: np.random.Generator) -> int:
    if not len(stack):
        raise InvariantViolation("victim requested from an empty MigrantStore")
    if policy is ReplacementPolicy.RANDOM:
        residents = stack.as_list()
        return residents[int(rng.integers(len(residents)))]
    return stack.victim()


class MigrantStoreController:
    """
    Page-granular DRAM region in front of PCM.

    Pages start in PCM. Off-chip misses bump a saturating per-page count; when it
    reaches the threshold the page is migrated by the DMA engine, evicting the
    replacement victim whose dirty sub-blocks are merged into its stale PCM copy.
    Accesses to a page that is being migrated in or out wait for the migration.
    """

    def __init__(self, sim: Simulator, dma: DmaEngine, pcm: MemoryDevice, dram: MemoryDevice,
                 policy: PolicyConfig, page_bytes: int, capacity_pages: int,
                 seed: int = 0, verify: bool = False):
        if capacity_pages < 1:
            raise InvariantViolation("MigrantStore needs at least one frame")
        self.sim = sim
        self.dma = dma
        self.pcm = pcm
        self.dram = dram
        self.policy = policy
        self.page_bytes = page_bytes
        self.capacity_pages = capacity_pages
        self.verify = verify

        self.table = PageTable()
        self.rapid = RapidBuffer(policy.rapid_capacity)
        self.stack = LruStack()
        self.stale = StaleSet()
        self.residents: Set[int] = set()
        self.free_frames: Deque[int] = deque(range(capacity_pages))
        self.rng = np.random.default_rng(seed)
        self.waiting: Dict[int, List[Callable[[int], None]]] = {}

        self.threshold = policy.threshold
        self.count_reads = policy.migrate_on is MigrateOn.ALL
        self.count_writes = policy.count_writebacks or policy.migrate_on is MigrateOn.WRITES_ONLY
        self.subblock_bytes = policy.subblock_bytes or page_bytes
        self.software_cycles = policy.migration_software_cycles

        self.dram_hits = 0
        self.dram_misses = 0
        self.migrations = 0
        self.migration_latencies: List[int] = []
        self.migration_log: List[Tuple[int, Optional[int]]] = []

        # verify mode: per-sub-block version stamps of the latest data and the PCM copy
        self._versions: Dict[Tuple[int, int], int] = {}
        self._pcm_versions: Dict[Tuple[int, int], int] = {}
        self._misses_since_pcm: Dict[int, int] = {}

    # -- helpers -----------------------------------------------------------

    def _dram_addr(self, pte: PageTableEntry, offset: int) -> int:
        return pte.dram_frame * self.page_bytes + offset

    def _defer(self, page: int, callback: Callable[[int], None]) -> None:
        self.waiting.setdefault(page, []).append(callback)

    def _touch(self, page: int) -> None:
        if self.policy.replacement is ReplacementPolicy.PERFECT_LRU:
            self.stack.push_front(page)
        else:
            self.rapid_insert(page)

    def _count_miss(self, pte: PageTableEntry) -> bool:
        """Bump the hysteresis count; True when the page should migrate"""
        if self.verify:
            self._misses_since_pcm[pte.vpage] = self._misses_since_pcm.get(pte.vpage, 0) + 1
        if self.threshold <= 1:
            return True
        pte.shared_field = min(pte.shared_field + 1, self.threshold)
        return pte.shared_field >= self.threshold

    def _can_migrate(self) -> bool:
        return bool(self.free_frames) or bool(len(self.stack))

    def _bump_version(self, page: int, offset: int, to_pcm: bool) -> None:
        if not self.verify:
            return
        key = (page, offset // self.subblock_bytes)
        self._versions[key] = self._versions.get(key, 0) + 1
        if to_pcm:
            self._pcm_versions[key] = self._versions[key]

    def dirty_extents(self, mask: int) -> List[Tuple[int, int]]:
        size = self.subblock_bytes
        return [(i * size, size) for i in range(self.page_bytes // size) if mask >> i & 1]

    # -- demand path -------------------------------------------------------

    def rapid_insert(self, page: int) -> None:
        self.rapid.insert(page)

    def on_read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        """Completion time, or None when the core waits on a migration"""
        page, offset = divmod(addr, self.page_bytes)
        pte = self.table.entry(page)
        if pte.in_transit:
            self._defer(page, lambda t: self._replay_read(core, addr, t))
            return None

        if pte.resident:
            self.dram_hits += 1
            self._touch(page)
            return self.dram.read(self._dram_addr(pte, offset), now).completion

        self.dram_misses += 1
        if self.count_reads and self._count_miss(pte) and self._can_migrate():
            self.trigger_migration(page, now, lambda t: self.sim.resume(core, t + self.software_cycles))
            return None
        return self.pcm.read(pte.pcm_frame * self.page_bytes + offset, now).completion

    def _replay_read(self, core: int, addr: int, now: int) -> None:
        completion = self.on_read_miss(core, addr, now)
        if completion is not None:
            self.sim.resume(core, completion)

    def on_writeback(self, core: int, addr: int, now: int, blocking: bool = True) -> Optional[int]:
        """Time the core may continue, or None while it waits on a migration"""
        page, offset = divmod(addr, self.page_bytes)
        pte = self.table.entry(page)
        if pte.in_transit:
            self._defer(page, lambda t: self.on_writeback(core, addr, t, blocking=False))
            return now

        if pte.resident:
            self.dram_hits += 1
            return self._apply_write(pte, offset, now).admitted

        self.dram_misses += 1
        if self.count_writes and self._count_miss(pte) and self._can_migrate():
            def on_done(t: int) -> None:
                self._apply_write(pte, offset, t)
                if blocking:
                    self.sim.resume(core, t + self.software_cycles)

            self.trigger_migration(page, now, on_done)
            return None if blocking else now

        self._bump_version(page, offset, to_pcm=True)
        return self.pcm.write(pte.pcm_frame * self.page_bytes + offset, now).admitted

    def _apply_write(self, pte: PageTableEntry, offset: int, now: int):
        result = self.dram.write(self._dram_addr(pte, offset), now)
        pte.shared_field |= 1 << (offset // self.subblock_bytes)
        self._touch(pte.vpage)
        self._bump_version(pte.vpage, offset, to_pcm=False)
        return result

    # -- migration ---------------------------------------------------------

    def update_lru_from_rapid(self) -> None:
        update_lru_from_rapid(self.rapid, self.stack)
        if self.verify:
            self._check_stack()

    def select_victim(self) -> int:
        return select_victim(self.policy.replacement, self.stack, self.rng)

    def trigger_migration(self, page: int, now: int,
                          on_done: Optional[Callable[[int], None]] = None) -> PageTransfer:
        """Start the four-operation page swap; on_done runs when the DMA has finished"""
        pte = self.table.entry(page)
        if pte.resident or pte.in_transit:
            raise InvariantViolation(f"page {page} cannot migrate from state {pte}")
        if self.verify and self._misses_since_pcm.get(page, 0) < max(self.threshold, 1):
            raise InvariantViolation(f"page {page} migrating before reaching the hysteresis threshold")

        if self.policy.replacement is ReplacementPolicy.RAPID_LRU:
            self.update_lru_from_rapid()
        pte.in_transit = True

        victim = None
        extents: List[Tuple[int, int]] = []
        if self.free_frames:
            frame = self.free_frames.popleft()
        else:
            victim = self.select_victim()
            vpte = self.table[victim]
            vpte.in_transit = True
            self.stack.remove(victim)
            frame = vpte.dram_frame
            extents = self.dirty_extents(vpte.shared_field)

        transfer = PageTransfer(
            label='migration',
            src=self.pcm,
            src_base=pte.pcm_frame * self.page_bytes,
            dst=self.dram,
            dst_base=frame * self.page_bytes,
            page_bytes=self.page_bytes,
            has_victim=victim is not None,
            victim_pcm_base=self.table[victim].pcm_frame * self.page_bytes if victim is not None else None,
            victim_extents=extents,
        )
        transfer.on_complete = lambda t: self._finish_migration(page, victim, frame, transfer, extents, on_done, t)
        self.migrations += 1
        logger.debug(f"migrate page {page} -> frame {frame} (victim {victim}, {len(extents)} dirty sub-blocks)")
        self.dma.start(transfer, now)
        return transfer

    def _finish_migration(self, page: int, victim: Optional[int], frame: int, transfer: PageTransfer,
                          extents: List[Tuple[int, int]], on_done: Optional[Callable[[int], None]],
                          now: int) -> None:
        if victim is not None:
            vpte = self.table[victim]
            if self.verify:
                self._merge_stale_copy(victim, extents)
            vpte.location = Location.IN_PCM
            vpte.dram_frame = None
            vpte.shared_field = 0
            vpte.in_transit = False
            self.stale.remove(vpte.pcm_frame)
            self.residents.discard(victim)
            self._misses_since_pcm.pop(victim, None)

        pte = self.table[page]
        pte.location = Location.IN_MIGRANTSTORE
        pte.dram_frame = frame
        pte.shared_field = 0
        pte.in_transit = False
        self.stale.add(pte.pcm_frame)
        self.residents.add(page)
        self.stack.push_front(page)
        self._misses_since_pcm.pop(page, None)

        self.migration_latencies.append(transfer.elapsed)
        self.migration_log.append((page, victim))
        if self.verify:
            self.check_invariants()

        if on_done is not None:
            on_done(now)
        waiters = self.waiting.pop(page, [])
        if victim is not None:
            waiters += self.waiting.pop(victim, [])
        for callback in waiters:
            callback(now)

    # -- verification ------------------------------------------------------

    def _merge_stale_copy(self, victim: int, extents: List[Tuple[int, int]]) -> None:
        for offset, _ in extents:
            key = (victim, offset // self.subblock_bytes)
            self._pcm_versions[key] = self._versions.get(key, 0)
        for index in range(self.page_bytes // self.subblock_bytes):
            key = (victim, index)
            if self._pcm_versions.get(key, 0) != self._versions.get(key, 0):
                raise InvariantViolation(
                    f"stale copy of page {victim} sub-block {index} is out of date after eviction")

    def _check_stack(self) -> None:
        expected = {page for page in self.residents if not self.table[page].in_transit}
        listed = self.stack.as_list()
        if len(listed) != len(expected) or set(listed) != expected:
            raise InvariantViolation("LRU stack is not a permutation of the resident pages")

    def check_invariants(self) -> None:
        if len(self.residents) > self.capacity_pages:
            raise InvariantViolation(
                f"{len(self.residents)} resident pages exceed capacity {self.capacity_pages}")
        for page in self.residents:
            pte = self.table[page]
            if pte.dram_frame is None or pte.pcm_frame not in self.stale:
                raise InvariantViolation(f"resident page {page} has inconsistent frames")
        if len(self.stale) != len(self.residents):
            raise InvariantViolation("stale frame set does not match the resident set")
        self._check_stack()
