"""Sample test data fixtures"""
from hybridmem.models.trace import TraceKind, TraceRecord

KB = 1024
MB = 1024 * KB
PAGE = 8192

SYNTHETIC_TRACE = {
    'generator': 'zipf',
    'footprint_pages': 32,
    'zipf_exponent': 1.0,
    'write_fraction': 0.2,
    'records': 2000,
    'gap_cycles': 200,
    'num_cores': 1,
    'seed': 0,
}

# Small geometry: 8-page MigrantStore, 2-set x 16-way hardware cache, 4-set L3
SMALL_CONFIG = {
    'trace': {'synthetic': SYNTHETIC_TRACE},
    'devices': {
        'pcm': {'capacity': 64 * MB},
        'base_dram': {'capacity': 64 * MB},
        'migrant_dram': {'row_bytes': 2048},
        'hw_cache_seq': {'capacity': 256 * KB, 'row_bytes': 2048},
        'hw_cache_par': {'capacity': 256 * KB, 'row_bytes': 2048},
    },
    'hw_cache': {'capacity': 256 * KB},
    'l3': {'capacity': 64 * KB},
    'migrantstore_capacity': 8 * PAGE,
    'os_quanta': {'capacity': 8 * PAGE, 'quantum_cycles': 100_000},
}

SAMPLE_TRACE_TEXT = """\
# timestamp core kind address
100 0 R 0x1000
150 1 W 0x2040

220 0 R 0x1040
230 1 R 0x4000
"""

MALFORMED_TRACES = {
    'too_few_fields': "100 0 R\n",
    'bad_kind': "100 0 X 0x1000\n",
    'bad_hex': "100 0 R 0xZZ\n",
    'unaligned': "100 0 R 0x1001\n",
    'regression': "200 0 R 0x1000\n100 0 R 0x1040\n",
}


def records(*rows):
    """TraceRecords from (timestamp, core, 'R' | 'W', addr) tuples"""
    return [TraceRecord(ts, core, TraceKind(kind), addr) for ts, core, kind, addr in rows]


def page_addr(page, offset=0):
    return page * PAGE + offset


def serial_trace(accesses, gap=200, start=100):
    """Single-core trace of (kind, addr) pairs spaced gap cycles apart"""
    return [TraceRecord(start + i * gap, 0, TraceKind(kind), addr)
            for i, (kind, addr) in enumerate(accesses)]


def evicted_dirty_mask(cache, addr):
    """Push addr's block out of its set and return the dirty mask it left with"""
    block = addr - addr % cache.block_bytes
    stride = cache.num_sets * cache.block_bytes
    for k in range(1, cache.associativity + 1):
        eviction = cache.fill(block + k * stride)
        if eviction is not None and eviction.block_addr == block:
            return eviction.dirty_mask
    raise AssertionError(f"block {block:#x} was not cached")
