"""Domain models for the simulator"""

from .trace import BLOCK_BYTES, GeneratorKind, SyntheticSpec, TraceKind, TraceRecord, TraceSource
from .geometry import AccessKind, BusConfig, CacheConfig, DeviceGeometry, EnergyTable, TagPolicy
from .experiment import (
    AblationConfig,
    DeviceSet,
    ExperimentConfig,
    LifetimeConfig,
    MigrateOn,
    OsQuantaConfig,
    PolicyConfig,
    ReplacementPolicy,
    RowBufferConfig,
    SchemeId,
    TimingConfig,
)
from .stats import EnergyLedger, SchemeStats, WearMap

__all__ = [
    'BLOCK_BYTES', 'GeneratorKind', 'SyntheticSpec', 'TraceKind', 'TraceRecord', 'TraceSource',
    'AccessKind', 'BusConfig', 'CacheConfig', 'DeviceGeometry', 'EnergyTable', 'TagPolicy',
    'AblationConfig', 'DeviceSet', 'ExperimentConfig', 'LifetimeConfig', 'MigrateOn',
    'OsQuantaConfig', 'PolicyConfig', 'ReplacementPolicy', 'RowBufferConfig', 'SchemeId',
    'TimingConfig', 'EnergyLedger', 'SchemeStats', 'WearMap',
]
