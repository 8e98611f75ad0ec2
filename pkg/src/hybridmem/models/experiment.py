"""Experiment configuration models"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .geometry import BusConfig, CacheConfig, DeviceGeometry
from .trace import TraceSource


class SchemeId(str, Enum):
    PCM_ONLY = 'pcm_only'
    DRAM_IDEAL = 'dram_ideal'
    PCM_BASE = 'pcm_base'
    HW_CACHE_SEQ = 'hw_cache_seq'
    HW_CACHE_PAR = 'hw_cache_par'
    ROW_BUFFERS = 'row_buffers'
    OS_QUANTA_COPY = 'os_quanta_copy'
    MIGRANTSTORE = 'migrantstore'


class ReplacementPolicy(str, Enum):
    RAPID_LRU = 'rapid_lru'
    PERFECT_LRU = 'perfect_lru'
    RANDOM = 'random'


class MigrateOn(str, Enum):
    ALL = 'all'
    WRITES_ONLY = 'writes_only'


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class TimingConfig(_Strict):
    cpu_hz: float = Field(default=2.0e9, gt=0.0)
    cpu_per_mem_cycle: int = Field(default=10, ge=1)


class DeviceSet(_Strict):
    pcm: DeviceGeometry
    base_dram: DeviceGeometry
    migrant_dram: DeviceGeometry
    hw_cache_seq: DeviceGeometry
    hw_cache_par: DeviceGeometry


class RowBufferConfig(_Strict):
    count: int = Field(default=8, ge=1)
    bytes: int = Field(default=2048, ge=64)


class PolicyConfig(_Strict):
    """
    MigrantStore policy knobs. threshold 0 disables hysteresis.

    software_cycles and software_energy_nj cover the whole migration handler;
    the stack_update_* share of it scans the RAPid buffer and maintains the LRU
    stack, which random replacement does not run.
    """

    threshold: int = Field(default=16, ge=0)
    subblock_bytes: Optional[int] = Field(default=512, ge=64)
    rapid_capacity: int = Field(default=20, ge=1)
    replacement: ReplacementPolicy = ReplacementPolicy.RAPID_LRU
    migrate_on: MigrateOn = MigrateOn.ALL
    count_writebacks: bool = True
    software_cycles: int = Field(default=5000, ge=0)
    software_energy_nj: float = Field(default=3000.0, ge=0.0)
    stack_update_cycles: int = Field(default=3333, ge=0)
    stack_update_energy_nj: float = Field(default=2000.0, ge=0.0)
    rapid_insert_energy_nj: float = Field(default=0.025, ge=0.0)
    flush_probe_cycles: int = Field(default=2, ge=0)

    @model_validator(mode='after')
    def _check_software_split(self) -> 'PolicyConfig':
        if self.stack_update_cycles > self.software_cycles:
            raise ValueError("stack_update_cycles cannot exceed software_cycles")
        if self.stack_update_energy_nj > self.software_energy_nj:
            raise ValueError("stack_update_energy_nj cannot exceed software_energy_nj")
        return self

    @property
    def migration_software_cycles(self) -> int:
        if self.replacement is ReplacementPolicy.RANDOM:
            return self.software_cycles - self.stack_update_cycles
        return self.software_cycles

    @property
    def migration_software_energy_nj(self) -> float:
        if self.replacement is ReplacementPolicy.RANDOM:
            return self.software_energy_nj - self.stack_update_energy_nj
        return self.software_energy_nj


class OsQuantaConfig(_Strict):
    quantum_cycles: int = Field(default=20_000_000, ge=1)
    write_threshold: int = Field(default=16, ge=1)
    capacity: int = Field(default=128 * 2**20, gt=0)


class LifetimeConfig(_Strict):
    endurance: float = Field(default=1.0e9, ge=0.0)
    quantile: float = Field(default=0.9999, gt=0.0, le=1.0)
    seconds_per_year: float = Field(default=3.156e7, gt=0.0)


class AblationConfig(_Strict):
    thresholds: List[int] = Field(default_factory=lambda: [0, 8, 16, 64])
    subblocks: List[Optional[int]] = Field(default_factory=lambda: [None, 128, 512])
    replacements: List[ReplacementPolicy] = Field(default_factory=lambda: [ReplacementPolicy.RAPID_LRU])
    migrate_on: List[MigrateOn] = Field(default_factory=lambda: [MigrateOn.ALL])
    capacities: List[int] = Field(default_factory=list)


class ExperimentConfig(_Strict):
    """Fully resolved experiment configuration"""

    trace: TraceSource
    schemes: List[SchemeId] = Field(default_factory=lambda: [SchemeId.PCM_BASE, SchemeId.MIGRANTSTORE])
    timing: TimingConfig = TimingConfig()
    bus: BusConfig = BusConfig()
    page_bytes: int = Field(default=8192, ge=64)
    devices: DeviceSet
    hw_cache: CacheConfig
    l3: CacheConfig
    row_buffers: RowBufferConfig = RowBufferConfig()
    policy: PolicyConfig = PolicyConfig()
    migrantstore_capacity: int = Field(default=128 * 2**20, gt=0)
    os_quanta: OsQuantaConfig = OsQuantaConfig()
    lifetime: LifetimeConfig = LifetimeConfig()
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    output_dir: str = 'results'
    verify: bool = False
    ablation: AblationConfig = AblationConfig()

    @model_validator(mode='after')
    def _check_trace_source(self) -> 'ExperimentConfig':
        if (self.trace.path is None) == (self.trace.synthetic is None):
            raise ValueError("trace must set exactly one of 'path' or 'synthetic'")
        return self

    def with_policy(self, **changes) -> 'ExperimentConfig':
        """Copy with policy knobs replaced (re-validated)"""
        policy = self.policy.model_dump()
        policy.update(changes)
        data = self.model_dump()
        data['policy'] = policy
        return ExperimentConfig.model_validate(data)

    def with_updates(self, **changes) -> 'ExperimentConfig':
        data = self.model_dump()
        data.update(changes)
        return ExperimentConfig.model_validate(data)

    def migrant_dram_geometry(self, capacity: Optional[int] = None) -> DeviceGeometry:
        """MigrantStore / OS-copy DRAM geometry resized to the region capacity"""
        data = self.devices.migrant_dram.model_dump()
        data['capacity'] = capacity if capacity is not None else self.migrantstore_capacity
        return DeviceGeometry.model_validate(data)
