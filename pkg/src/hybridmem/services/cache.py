"""Set-associative cache with LRU replacement and sub-block dirty bits"""
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional

from ..models.geometry import CacheConfig


@dataclass(slots=True)
class CacheLine:
    tag: int = 0
    valid: bool = False
    dirty_mask: int = 0


class LookupResult(NamedTuple):
    hit: bool
    set_index: int
    way: int


class Eviction(NamedTuple):
    """A replaced valid line"""

    tag: int
    block_addr: int
    dirty_mask: int

    @property
    def dirty_count(self) -> int:
        return bin(self.dirty_mask).count('1')


class CacheSet:
    __slots__ = ('lines', 'order', 'tags')

    def __init__(self, associativity: int):
        self.lines = [CacheLine() for _ in range(associativity)]
        # way indices, most recent first; invalid ways sit at the tail
        self.order = list(range(associativity))
        self.tags: Dict[int, int] = {}

    def touch(self, way: int) -> None:
        order = self.order
        if order[0] != way:
            order.remove(way)
            order.insert(0, way)

    def victim_way(self) -> int:
        return self.order[-1]


class SetAssociativeCache:
    """
    Generic set-associative cache. Sets are created lazily.

    Set index is block number modulo num_sets, so non-power-of-two set counts work.
    """

    def __init__(self, config: CacheConfig):
        self.config = config
        self.block_bytes = config.block_bytes
        self.associativity = config.associativity
        self.num_sets = config.num_sets
        self.subblock_bytes = config.subblock_bytes or config.block_bytes
        self._sets: Dict[int, CacheSet] = {}

    def _locate(self, addr: int):
        block = addr // self.block_bytes
        return block % self.num_sets, block // self.num_sets

    def _set(self, set_index: int) -> CacheSet:
        cache_set = self._sets.get(set_index)
        if cache_set is None:
            cache_set = self._sets[set_index] = CacheSet(self.associativity)
        return cache_set

    def block_address(self, set_index: int, tag: int) -> int:
        return (tag * self.num_sets + set_index) * self.block_bytes

    def lookup(self, addr: int) -> LookupResult:
        """On a hit the way becomes most recent; on a miss way is the victim way"""
        set_index, tag = self._locate(addr)
        cache_set = self._set(set_index)
        way = cache_set.tags.get(tag)
        if way is not None:
            cache_set.touch(way)
            return LookupResult(True, set_index, way)
        return LookupResult(False, set_index, cache_set.victim_way())

    def contains(self, addr: int) -> bool:
        set_index, tag = self._locate(addr)
        cache_set = self._sets.get(set_index)
        return cache_set is not None and tag in cache_set.tags

    def fill(self, addr: int) -> Optional[Eviction]:
        """Install addr's block in the LRU way; returns the replaced valid line, if any"""
        set_index, tag = self._locate(addr)
        cache_set = self._set(set_index)
        if tag in cache_set.tags:
            raise ValueError(f"block {addr:#x} already cached")
        way = cache_set.victim_way()
        line = cache_set.lines[way]
        evicted = None
        if line.valid:
            del cache_set.tags[line.tag]
            evicted = Eviction(line.tag, self.block_address(set_index, line.tag), line.dirty_mask)
        line.tag = tag
        line.valid = True
        line.dirty_mask = 0
        cache_set.tags[tag] = way
        cache_set.touch(way)
        return evicted

    def write_hit(self, addr: int) -> None:
        """Mark the sub-block containing addr dirty"""
        set_index, tag = self._locate(addr)
        cache_set = self._set(set_index)
        way = cache_set.tags.get(tag)
        if way is None:
            raise KeyError(f"write_hit on uncached block {addr:#x}")
        offset = addr % self.block_bytes
        cache_set.lines[way].dirty_mask |= 1 << (offset // self.subblock_bytes)

    def lru_ranks(self, set_index: int) -> List[int]:
        """lru_rank per way (0 = most recent)"""
        cache_set = self._set(set_index)
        ranks = [0] * self.associativity
        for rank, way in enumerate(cache_set.order):
            ranks[way] = rank
        return ranks

    def frame_index(self, set_index: int, way: int) -> int:
        """Linear slot number of (set, way) in the backing data array"""
        return set_index * self.associativity + way

    def subblock_extents(self, dirty_mask: int):
        """(offset, nbytes) pairs of dirty sub-blocks within a block"""
        size = self.subblock_bytes
        return [(i * size, size) for i in range(self.block_bytes // size) if dirty_mask >> i & 1]
