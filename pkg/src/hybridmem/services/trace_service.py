"""Trace parsing, serialization and synthetic generation"""
import io
import logging
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from ..models.trace import BLOCK_BYTES, GeneratorKind, SyntheticSpec, TraceKind, TraceRecord
from .exceptions import (
    AddressRangeError,
    ConfigurationError,
    TimestampRegressionError,
    TraceAlignmentError,
    TraceFormatError,
)

logger = logging.getLogger(__name__)

DEFAULT_PCM_CAPACITY = 8 * 2**30

TraceInput = Union[str, bytes, Iterable[str], io.IOBase]


def _lines(stream: TraceInput) -> Iterable[str]:
    if isinstance(stream, (bytes, str)):
        return stream.splitlines()
    return stream


def parse_trace(stream: TraceInput, capacity: int = DEFAULT_PCM_CAPACITY,
                num_cores: Optional[int] = None) -> List[TraceRecord]:
    """
    Parse the text trace format: ``<timestamp> <core> <R|W> <hex addr>``.

    Records come back in file order. Blank lines and ``#`` comments are skipped.

    Raises:
        TraceFormatError: malformed line (carries the 1-based line number)
        TraceAlignmentError: address not 64-byte aligned
        AddressRangeError: address at or beyond capacity
        TimestampRegressionError: a core's timestamp went backwards
    """
    records = []
    last_ts: Dict[int, int] = {}
    for line_number, raw in enumerate(_lines(stream), start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode('utf-8')
            except UnicodeDecodeError as e:
                raise TraceFormatError(f"invalid UTF-8 at byte {e.start}", line_number) from e
        line = raw.strip()
        if not line or line.startswith('#'):
            continue

        fields = line.split()
        if len(fields) != 4:
            raise TraceFormatError(f"expected 4 fields, got {len(fields)}", line_number)
        try:
            timestamp = int(fields[0])
            core = int(fields[1])
            kind = TraceKind(fields[2].upper())
            addr = int(fields[3], 16)
        except ValueError as e:
            raise TraceFormatError(f"cannot parse {line!r}: {e}", line_number) from e

        if timestamp < 0 or core < 0 or addr < 0:
            raise TraceFormatError("negative field", line_number)
        if num_cores is not None and core >= num_cores:
            raise TraceFormatError(f"core {core} outside [0, {num_cores})", line_number)
        if addr % BLOCK_BYTES:
            raise TraceAlignmentError(f"address {addr:#x} is not {BLOCK_BYTES}-byte aligned", line_number)
        if addr >= capacity:
            raise AddressRangeError(f"line {line_number}: address {addr:#x} beyond capacity {capacity:#x}")
        if timestamp < last_ts.get(core, 0):
            raise TimestampRegressionError(
                f"core {core} timestamp {timestamp} < previous {last_ts[core]}", line_number)

        last_ts[core] = timestamp
        records.append(TraceRecord(timestamp, core, kind, addr))
    return records


def serialize_trace(records: Iterable[TraceRecord]) -> str:
    """Inverse of parse_trace"""
    return ''.join(f"{record.to_line()}\n" for record in records)


def zipf_weights(n: int, exponent: float) -> np.ndarray:
    if exponent < 0:
        raise ConfigurationError(f"zipf exponent must be >= 0, got {exponent}")
    ranks = np.arange(1, n + 1, dtype=np.float64)
    weights = ranks ** -exponent
    return weights / weights.sum()


def _assemble(spec: SyntheticSpec, rng: np.random.Generator, pages: np.ndarray) -> List[TraceRecord]:
    """Turn a page sequence into records: offsets, kinds, cores and timestamps"""
    n = len(pages)
    if n == 0:
        return []
    blocks_per_page = spec.page_bytes // BLOCK_BYTES
    offsets = rng.integers(0, blocks_per_page, size=n)
    writes = rng.random(n) < spec.write_fraction
    gaps = np.maximum(1, np.rint(rng.exponential(spec.gap_cycles, size=n))).astype(np.int64)

    cores = np.arange(n) % spec.num_cores
    timestamps = np.empty(n, dtype=np.int64)
    for core in range(spec.num_cores):
        mask = cores == core
        timestamps[mask] = np.cumsum(gaps[mask])

    addrs = pages.astype(np.int64) * spec.page_bytes + offsets * BLOCK_BYTES
    return [
        TraceRecord(int(ts), int(core), TraceKind.WRITEBACK if w else TraceKind.READ_MISS, int(addr))
        for ts, core, w, addr in zip(timestamps.tolist(), cores.tolist(), writes.tolist(), addrs.tolist())
    ]


def _zipf_pages(rng: np.random.Generator, spec: SyntheticSpec, count: int, first_page: int) -> np.ndarray:
    weights = zipf_weights(spec.footprint_pages, spec.zipf_exponent)
    rank_to_page = rng.permutation(spec.footprint_pages)
    ranks = rng.choice(spec.footprint_pages, size=count, p=weights)
    return first_page + rank_to_page[ranks]


def gen_zipf(spec: SyntheticSpec) -> List[TraceRecord]:
    """Page popularity follows Zipf(exponent) over a seeded permutation of the footprint"""
    rng = np.random.default_rng(spec.seed)
    pages = _zipf_pages(rng, spec, spec.records, spec.base_page)
    return _assemble(spec, rng, pages)


def gen_loop(spec: SyntheticSpec) -> List[TraceRecord]:
    """Cycle through the footprint in page order, touch_records records per page visit"""
    rng = np.random.default_rng(spec.seed)
    touches = np.arange(spec.records) // spec.touch_records
    pages = spec.base_page + touches % spec.footprint_pages
    return _assemble(spec, rng, pages)


def gen_phased(spec: SyntheticSpec) -> List[TraceRecord]:
    """Split the records into phases, each over its own disjoint set of pages"""
    rng = np.random.default_rng(spec.seed)
    bounds = np.linspace(0, spec.records, spec.phases + 1).astype(np.int64)
    chunks = []
    for phase in range(spec.phases):
        count = int(bounds[phase + 1] - bounds[phase])
        first_page = spec.base_page + phase * spec.footprint_pages
        chunks.append(_zipf_pages(rng, spec, count, first_page))
    pages = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return _assemble(spec, rng, pages)


GENERATORS = {
    GeneratorKind.ZIPF: gen_zipf,
    GeneratorKind.LOOP: gen_loop,
    GeneratorKind.PHASED: gen_phased,
}


def gen_synthetic(spec: SyntheticSpec) -> List[TraceRecord]:
    records = GENERATORS[spec.generator](spec)
    logger.info(f"Generated {len(records)} {spec.generator.value} records "
                f"over {spec.footprint_pages} pages (seed {spec.seed})")
    return records
