"""Deterministic discrete-event loop driving per-core trace streams"""
import heapq
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Deque, Dict, Iterable, List, Optional

from ..models.trace import TraceKind, TraceRecord
from .exceptions import InvariantViolation

if TYPE_CHECKING:
    from .schemes.base import Scheme

logger = logging.getLogger(__name__)

COMPLETION = 0
DEMAND = 1
DMA = 2


@dataclass
class CoreState:
    core_id: int
    records: Deque[TraceRecord] = field(default_factory=deque)
    shift: int = 0
    finish: int = 0
    issue_time: int = 0
    blocked: bool = False
    done: bool = False


class EventQueue:
    """Min-heap ordered by (time, priority, tiebreak, insertion order)"""

    def __init__(self):
        self._heap = []
        self._seq = itertools.count()
        self.now = 0

    def push(self, time: int, priority: int, callback: Callable[[int], None], tiebreak: int = 0) -> None:
        if time < self.now:
            time = self.now
        heapq.heappush(self._heap, (time, priority, tiebreak, next(self._seq), callback))

    def pop(self):
        time, _, _, _, callback = heapq.heappop(self._heap)
        self.now = time
        return time, callback

    def __len__(self):
        return len(self._heap)


class Simulator:
    """
    Replays a trace against one scheme.

    A core issues each record at its trace timestamp plus accumulated stall. Read
    misses block the core until the scheme reports completion; writebacks let it
    continue after any admission backpressure. A scheme may return None to keep the
    core blocked and later call resume().
    """

    def __init__(self, scheme: 'Scheme', trace: Iterable[TraceRecord]):
        self.scheme = scheme
        self.events = EventQueue()
        self.cores: Dict[int, CoreState] = {}
        self.read_misses = 0
        self.writebacks = 0
        for record in trace:
            core = self.cores.get(record.core)
            if core is None:
                core = self.cores[record.core] = CoreState(record.core)
            core.records.append(record)
        scheme.bind(self)

    @property
    def now(self) -> int:
        return self.events.now

    def schedule(self, time: int, priority: int, callback: Callable[[int], None], tiebreak: int = 0) -> None:
        self.events.push(time, priority, callback, tiebreak)

    def active_cores(self) -> int:
        return sum(1 for core in self.cores.values() if not core.done)

    def _queue_next(self, core: CoreState, not_before: int) -> None:
        if not core.records:
            core.done = True
            core.finish = max(core.finish, not_before)
            return
        issue = core.records[0].timestamp + core.shift
        if issue < not_before:
            issue = not_before
        self.schedule(issue, DEMAND, lambda t, c=core: self._issue(c, t), tiebreak=core.core_id)

    def _issue(self, core: CoreState, now: int) -> None:
        record = core.records.popleft()
        core.issue_time = now
        if record.kind is TraceKind.READ_MISS:
            self.read_misses += 1
            resume_at = self.scheme.read_miss(record.core, record.addr, now)
        else:
            self.writebacks += 1
            resume_at = self.scheme.writeback(record.core, record.addr, now)

        if resume_at is None:
            core.blocked = True
            return
        self._continue(core, now, resume_at)

    def _continue(self, core: CoreState, issued: int, resume_at: int) -> None:
        if resume_at < issued:
            resume_at = issued
        core.shift += resume_at - issued
        core.finish = resume_at
        self._queue_next(core, resume_at)

    def resume(self, core_id: int, time: int) -> None:
        """Unblock a core that a scheme kept waiting"""
        core = self.cores[core_id]
        if not core.blocked:
            raise RuntimeError(f"core {core_id} is not blocked")
        core.blocked = False
        self._continue(core, core.issue_time, time)

    def run(self) -> List[int]:
        """Run to quiescence; returns per-core finish times ordered by core id"""
        for core in self.cores.values():
            self._queue_next(core, 0)
        events = self.events
        while len(events):
            time, callback = events.pop()
            callback(time)
        stuck = [core.core_id for core in self.cores.values() if core.blocked]
        if stuck:
            raise InvariantViolation(f"cores {stuck} still blocked at end of simulation")
        return [self.cores[c].finish for c in sorted(self.cores)]
