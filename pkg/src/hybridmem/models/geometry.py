"""Device, bus and cache geometry models"""
from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class AccessKind(str, Enum):
    READ = 'read'
    WRITE = 'write'
    WRITE_SUBBLOCK = 'write_subblock'


class TagPolicy(str, Enum):
    SEQUENTIAL = 'sequential'
    PARALLEL = 'parallel'
    NONE = 'none'


class EnergyTable(BaseModel):
    """Per-access dynamic energy in nJ"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    read_miss: float = Field(ge=0.0)
    read_hit: float = Field(ge=0.0)
    write_miss: float = Field(ge=0.0)
    write_subblock_miss: float = Field(ge=0.0)
    write_hit: float = Field(ge=0.0)
    subblock_reference_bytes: int = Field(default=512, gt=64)


class DeviceGeometry(BaseModel):
    """Banked memory device. Latencies are in memory cycles."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    name: str
    technology: Literal['pcm', 'dram']
    capacity: int = Field(gt=0)
    num_banks: int = Field(gt=0)
    interleave: int = Field(default=64, gt=0)
    row_bytes: int = Field(default=8192, gt=0)
    queue_depth: int = Field(default=32, ge=1)
    read_latency: int = Field(gt=0)
    write_latency: int = Field(gt=0)
    row_hit_fraction: float = Field(default=0.4, gt=0.0, le=1.0)
    energy: EnergyTable
    leakage_mw: float = Field(default=0.0, ge=0.0)

    @model_validator(mode='after')
    def _check_layout(self) -> 'DeviceGeometry':
        if self.capacity % (self.num_banks * self.row_bytes):
            raise ValueError(
                f"{self.name}: capacity {self.capacity} not divisible by "
                f"num_banks x row_bytes ({self.num_banks} x {self.row_bytes})"
            )
        if self.row_bytes % self.interleave:
            raise ValueError(f"{self.name}: row_bytes must be a multiple of interleave")
        return self

    @property
    def is_pcm(self) -> bool:
        return self.technology == 'pcm'


class BusConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    width_bits: int = Field(default=256, gt=0, multiple_of=8)
    cycle_mem: int = Field(default=1, ge=1)


class CacheConfig(BaseModel):
    """Set-associative cache geometry"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    capacity: int = Field(gt=0)
    block_bytes: int = Field(gt=0)
    associativity: int = Field(ge=1)
    subblock_bytes: Optional[int] = Field(default=None, gt=0)
    tag_policy: TagPolicy = TagPolicy.NONE
    hit_latency: int = Field(default=0, ge=0)
    tag_latency: int = Field(default=0, ge=0)
    access_energy_nj: float = Field(default=0.0, ge=0.0)
    leakage_mw: float = Field(default=0.0, ge=0.0)

    @model_validator(mode='after')
    def _check_layout(self) -> 'CacheConfig':
        if self.capacity % (self.block_bytes * self.associativity):
            raise ValueError("cache capacity must be divisible by block_bytes x associativity")
        if self.subblock_bytes is not None and self.block_bytes % self.subblock_bytes:
            raise ValueError("subblock_bytes must divide block_bytes")
        return self

    @property
    def num_sets(self) -> int:
        return self.capacity // (self.block_bytes * self.associativity)

    @property
    def subblocks_per_block(self) -> int:
        if self.subblock_bytes is None:
            return 1
        return self.block_bytes // self.subblock_bytes
