"""Memory-system organizations driven by the event loop"""

from .base import Scheme
from .direct import DramIdealScheme, PcmOnlyScheme
from .hw_cache import HwCacheParScheme, HwCacheSeqScheme
from .migrant import MigrantStoreScheme
from .os_quanta import OsQuantaCopyScheme
from .pcm_base import PcmBaseScheme
from .row_buffers import RowBufferScheme
from .runner import SCHEME_REGISTRY, build_scheme, run

__all__ = [
    'Scheme', 'DramIdealScheme', 'PcmOnlyScheme', 'HwCacheParScheme', 'HwCacheSeqScheme',
    'MigrantStoreScheme', 'OsQuantaCopyScheme', 'PcmBaseScheme', 'RowBufferScheme',
    'SCHEME_REGISTRY', 'build_scheme', 'run',
]
