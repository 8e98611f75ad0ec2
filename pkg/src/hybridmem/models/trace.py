"""Trace record and synthetic trace specification models"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

BLOCK_BYTES = 64


class TraceKind(str, Enum):
    """Post-L2 memory event kind"""

    READ_MISS = 'R'
    WRITEBACK = 'W'


@dataclass(frozen=True, slots=True)
class TraceRecord:
    """One L2 read miss or L2 writeback"""

    timestamp: int
    core: int
    kind: TraceKind
    addr: int
    size: int = BLOCK_BYTES

    @property
    def is_write(self) -> bool:
        return self.kind is TraceKind.WRITEBACK

    def to_line(self) -> str:
        return f"{self.timestamp} {self.core} {self.kind.value} {self.addr:#x}"

    def __str__(self):
        return self.to_line()


class GeneratorKind(str, Enum):
    ZIPF = 'zipf'
    LOOP = 'loop'
    PHASED = 'phased'


class SyntheticSpec(BaseModel):
    """Parameters of a seeded synthetic trace"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    generator: GeneratorKind = GeneratorKind.ZIPF
    footprint_pages: int = Field(default=1024, ge=1)
    zipf_exponent: float = Field(default=1.0, ge=0.0)
    write_fraction: float = Field(default=0.3, ge=0.0, le=1.0)
    records: int = Field(default=100_000, ge=0)
    gap_cycles: int = Field(default=200, ge=1)
    num_cores: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    page_bytes: int = Field(default=8192, ge=BLOCK_BYTES)
    base_page: int = Field(default=0, ge=0)
    touch_records: int = Field(default=1, ge=1)
    phases: int = Field(default=2, ge=1)


class TraceSource(BaseModel):
    """Either a trace file path or a synthetic specification"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    path: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None
