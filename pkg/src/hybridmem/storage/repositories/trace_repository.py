"""Repository for trace files"""
from pathlib import Path
from typing import List, Optional, Sequence

from ...models.trace import TraceRecord
from ...services.trace_service import DEFAULT_PCM_CAPACITY, parse_trace, serialize_trace
from .base import FileRepository


class TraceRepository(FileRepository):
    """Trace text files; paths are relative to the repository root unless absolute"""

    def __init__(self, root='.', capacity: int = DEFAULT_PCM_CAPACITY, num_cores: Optional[int] = None):
        super().__init__(root)
        self.capacity = capacity
        self.num_cores = num_cores

    def save(self, name: str, entity: Sequence[TraceRecord]) -> Path:
        return self.write_text(name, serialize_trace(entity))

    def load(self, name: str) -> List[TraceRecord]:
        records = parse_trace(self.read_bytes(name), capacity=self.capacity, num_cores=self.num_cores)
        self.logger.info(f"Loaded {len(records)} trace records from {self.path_for(name)}")
        return records
