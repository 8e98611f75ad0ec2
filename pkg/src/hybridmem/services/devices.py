"""Banked PCM/DRAM timing and energy model with a shared memory bus"""
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Deque, List, NamedTuple, Optional, Tuple

from ..models.geometry import AccessKind, BusConfig, DeviceGeometry
from ..models.stats import WearMap, nj_to_pj
from ..models.trace import BLOCK_BYTES
from .exceptions import AddressRangeError

CPU_PER_MEM_CYCLE = 10
NJ_PER_MW_SECOND = 1e6


class AddressMapping(NamedTuple):
    bank: int
    row: int
    column: int


@dataclass(frozen=True, slots=True)
class AccessResult:
    """Timing of one device access, in CPU cycles"""

    admitted: int
    start: int
    device_done: int
    completion: int
    row_hit: bool

    def stall_since(self, now: int) -> int:
        """Backpressure delay seen by the issuer"""
        return self.admitted - now


def map_address(addr: int, geom: DeviceGeometry) -> AddressMapping:
    """Bank by interleave stripe, row by bank-wide row group"""
    if not 0 <= addr < geom.capacity:
        raise AddressRangeError(f"{geom.name}: address {addr:#x} outside [0, {geom.capacity:#x})")
    stripe = addr // geom.interleave
    bank = stripe % geom.num_banks
    row = addr // (geom.num_banks * geom.row_bytes)
    column = ((stripe // geom.num_banks) * geom.interleave + addr % geom.interleave) % geom.row_bytes
    return AddressMapping(bank, row, column)


def unmap_address(bank: int, row: int, column: int, geom: DeviceGeometry) -> int:
    """Inverse of map_address"""
    stripe_in_row, within = divmod(column, geom.interleave)
    stripe = stripe_in_row * geom.num_banks + bank
    return row * geom.num_banks * geom.row_bytes + stripe * geom.interleave + within


def bus_transfer_cycles(nbytes: int, bus: BusConfig = BusConfig(),
                        cpu_per_mem_cycle: int = CPU_PER_MEM_CYCLE) -> int:
    if nbytes <= 0:
        raise ValueError(f"transfer size must be positive, got {nbytes}")
    return math.ceil(nbytes / (bus.width_bits // 8)) * bus.cycle_mem * cpu_per_mem_cycle


def device_time(geom: DeviceGeometry, kind: AccessKind, row_hit: bool,
                cpu_per_mem_cycle: int = CPU_PER_MEM_CYCLE) -> int:
    latency = geom.read_latency if kind is AccessKind.READ else geom.write_latency
    scale = geom.row_hit_fraction if row_hit else 1.0
    return int(round(latency * cpu_per_mem_cycle * scale))


def access_energy(geom: DeviceGeometry, kind: AccessKind, row_hit: bool,
                  nbytes: int = BLOCK_BYTES) -> float:
    """
    Dynamic energy of one access in nJ.

    Sub-block writes are array writes (always the row-miss class); their energy
    is linear in size through the 64 B and reference sub-block entries.
    """
    table = geom.energy
    if kind is AccessKind.READ:
        return table.read_hit if row_hit else table.read_miss
    if kind is AccessKind.WRITE:
        return table.write_hit if row_hit else table.write_miss
    ref = table.subblock_reference_bytes
    slope = (table.write_subblock_miss - table.write_miss) / (ref - BLOCK_BYTES)
    return table.write_miss + (nbytes - BLOCK_BYTES) * slope


def leakage_energy(geom_or_mw, elapsed: int, cpu_hz: float = 2.0e9) -> float:
    """Leakage in nJ over elapsed CPU cycles"""
    if cpu_hz <= 0:
        raise ValueError("cpu_hz must be positive")
    mw = geom_or_mw.leakage_mw if isinstance(geom_or_mw, DeviceGeometry) else float(geom_or_mw)
    return mw * (elapsed / cpu_hz) * NJ_PER_MW_SECOND


def selective_update_ratio(geom: DeviceGeometry) -> int:
    """Full-row write granularity over a 64 B selective write"""
    return geom.row_bytes // BLOCK_BYTES


class Bus:
    """Shared data bus between the controller and every device"""

    def __init__(self, config: BusConfig = BusConfig(), cpu_per_mem_cycle: int = CPU_PER_MEM_CYCLE):
        self.config = config
        self.cpu_per_mem_cycle = cpu_per_mem_cycle
        self.busy_until = 0
        self.busy_cycles = 0
        self._burst_cycles = bus_transfer_cycles(BLOCK_BYTES, config, cpu_per_mem_cycle)

    def transfer_cycles(self, nbytes: int) -> int:
        if nbytes == BLOCK_BYTES:
            return self._burst_cycles
        return bus_transfer_cycles(nbytes, self.config, self.cpu_per_mem_cycle)

    def transfer(self, ready: int, nbytes: int = BLOCK_BYTES) -> int:
        """Reserve the bus after ready; returns the transfer end time"""
        cycles = self.transfer_cycles(nbytes)
        start = ready if ready > self.busy_until else self.busy_until
        self.busy_until = start + cycles
        self.busy_cycles += cycles
        return self.busy_until


class BankState:
    """Open row, occupancy horizon and queue of admitted-but-unstarted requests"""

    __slots__ = ('bank_id', 'queue_depth', 'open_row', 'busy_until', 'busy_cycles', 'queue')

    def __init__(self, bank_id: int, queue_depth: int):
        self.bank_id = bank_id
        self.queue_depth = queue_depth
        self.open_row: Optional[int] = None
        self.busy_until = 0
        self.busy_cycles = 0
        self.queue: Deque[int] = deque()

    def admit(self, now: int) -> int:
        """Earliest time a new request fits in the queue"""
        queue = self.queue
        while queue and queue[0] <= now:
            queue.popleft()
        if len(queue) < self.queue_depth:
            return now
        admitted = queue.popleft()
        while queue and queue[0] <= admitted:
            queue.popleft()
        return admitted

    def occupy(self, ready: int, admitted: int, row: int, hit_time: int, miss_time: int,
               row_hit: Optional[bool] = None) -> Tuple[int, int, bool]:
        """Serve one request FIFO; returns (start, done, row_hit)"""
        start = ready if ready > self.busy_until else self.busy_until
        hit = (self.open_row == row) if row_hit is None else row_hit
        duration = hit_time if hit else miss_time
        self.open_row = row
        self.busy_until = start + duration
        self.busy_cycles += duration
        if start > admitted:
            self.queue.append(start)
        return start, self.busy_until, hit


def schedule_access(bank: BankState, geom: DeviceGeometry, kind: AccessKind, row: int, now: int,
                    cpu_per_mem_cycle: int = CPU_PER_MEM_CYCLE, admitted: Optional[int] = None,
                    row_hit: Optional[bool] = None,
                    times: Optional[Tuple[int, int]] = None) -> Tuple[int, bool]:
    """
    Bank leg of one access ready at now; returns (device completion, row_hit).

    admitted is when the request entered the bank queue. Without it the request
    is admitted at now first. times is a precomputed (hit, miss) duration pair.
    Sub-block writes are always row misses.
    """
    if admitted is None:
        admitted = now = bank.admit(now)
    if kind is AccessKind.WRITE_SUBBLOCK:
        row_hit = False
    if times is None:
        times = (device_time(geom, kind, True, cpu_per_mem_cycle),
                 device_time(geom, kind, False, cpu_per_mem_cycle))
    _, done, hit = bank.occupy(now, admitted, row, times[0], times[1], row_hit)
    return done, hit


class MemoryDevice:
    """
    One banked device attached to the shared bus.

    Keeps dynamic energy in integer picojoules, a count log keyed by
    (kind, row_hit, bytes) for ledger replay, and PCM wear when the device is PCM.
    """

    def __init__(self, geom: DeviceGeometry, bus: Bus, cpu_per_mem_cycle: int = CPU_PER_MEM_CYCLE,
                 record_log: bool = False):
        self.geom = geom
        self.name = geom.name
        self.bus = bus
        self.cpu_per_mem_cycle = cpu_per_mem_cycle
        self.banks = [BankState(i, geom.queue_depth) for i in range(geom.num_banks)]
        self.access_counts: Counter = Counter()
        self.dynamic_pj = 0
        self.wear: Optional[WearMap] = WearMap() if geom.is_pcm else None
        self.direct_write_bytes = 0
        self.subblock_write_bytes = 0
        self.log: Optional[List[Tuple[str, int, int, int, bool]]] = [] if record_log else None

        self._times = {
            (kind, hit): device_time(geom, kind, hit, cpu_per_mem_cycle)
            for kind in AccessKind for hit in (True, False)
        }
        self._energy_pj = {}

    def energy_pj(self, kind: AccessKind, row_hit: bool, nbytes: int = BLOCK_BYTES) -> int:
        key = (kind, row_hit, nbytes)
        value = self._energy_pj.get(key)
        if value is None:
            value = self._energy_pj[key] = nj_to_pj(access_energy(self.geom, kind, row_hit, nbytes))
        return value

    def access(self, kind: AccessKind, addr: int, now: int, nbytes: int = BLOCK_BYTES,
               transfer: bool = True, row_hit: Optional[bool] = None,
               buffered: bool = False, record_wear: bool = True) -> AccessResult:
        """
        Issue one access at now.

        Reads use the bank then the bus; writes use the bus then the bank. With
        transfer=False the bus leg is skipped (the data is already latched, as in a
        DMA copy). buffered=True serves the access from a row buffer: row-hit timing
        and energy, no array write. record_wear=False leaves wear to the caller
        for writes whose blocks are not address-contiguous.
        """
        geom = self.geom
        bank_id, row, _ = map_address(addr, geom)
        bank = self.banks[bank_id]
        admitted = bank.admit(now)

        if buffered:
            row_hit = True
            timing_kind = AccessKind.READ
        else:
            timing_kind = kind
        times = (self._times[(timing_kind, True)], self._times[(timing_kind, False)])

        if kind is AccessKind.READ:
            done, hit = schedule_access(bank, geom, timing_kind, row, admitted,
                                        admitted=admitted, row_hit=row_hit, times=times)
            completion = self.bus.transfer(done, nbytes) if transfer else done
        else:
            ready = self.bus.transfer(admitted, nbytes) if transfer else admitted
            done, hit = schedule_access(bank, geom, timing_kind, row, ready,
                                        admitted=admitted, row_hit=row_hit, times=times)
            completion = done
        start = done - (times[0] if hit else times[1])
        if kind is not AccessKind.READ:
            if self.wear is not None and not buffered:
                if record_wear:
                    self.wear.record_write(addr, nbytes)
                if kind is AccessKind.WRITE_SUBBLOCK:
                    self.subblock_write_bytes += nbytes
                else:
                    self.direct_write_bytes += nbytes

        self.access_counts[(kind.value, hit, nbytes)] += 1
        self.dynamic_pj += self.energy_pj(kind, hit, nbytes)
        if self.log is not None:
            self.log.append((kind.value, bank_id, start, done, hit))
        return AccessResult(admitted, start, done, completion, hit)

    def read(self, addr: int, now: int, **kwargs) -> AccessResult:
        return self.access(AccessKind.READ, addr, now, **kwargs)

    def write(self, addr: int, now: int, **kwargs) -> AccessResult:
        return self.access(AccessKind.WRITE, addr, now, **kwargs)

    @property
    def busy_bank_cycles(self) -> int:
        return sum(bank.busy_cycles for bank in self.banks)

    @property
    def drain_time(self) -> int:
        return max((bank.busy_until for bank in self.banks), default=0)

    def leakage_nj(self, elapsed: int, cpu_hz: float) -> float:
        return leakage_energy(self.geom, elapsed, cpu_hz)
