"""End-to-end checks of calibration, conservation and scheme trends"""
import json

import numpy as np
import pytest

from hybridmem.models.experiment import ReplacementPolicy
from hybridmem.models.geometry import CacheConfig
from hybridmem.services.cache import SetAssociativeCache
from hybridmem.services.devices import selective_update_ratio
from hybridmem.services.experiment_service import ExperimentService
from hybridmem.services.metrics import check_conservation, quantile_writes
from hybridmem.services.schemes import run
from hybridmem.services.trace_service import gen_synthetic

from tests.fixtures.reference import ReferenceLru
from tests.fixtures.sample_data import PAGE, page_addr, serial_trace

pytestmark = pytest.mark.integration


def reads(*pages):
    return [('R', page_addr(p)) for p in pages]


def zipf_config(make_config, **synthetic):
    return make_config({'trace': {'synthetic': synthetic}})


class TestMigrationCalibration:
    """One migration against the default device parameters"""

    @pytest.fixture
    def config(self, loader):
        # one 128 KB row group of MigrantStore DRAM: 16 frames
        return loader.from_dict({
            'trace': {'path': 'unused.txt'},
            'migrantstore_capacity': 16 * PAGE,
            'policy': {'threshold': 1},
        })

    def test_occupancy(self, config):
        """Test a swap with a clean victim occupies the memory system for about 6000 cycles"""
        stats = run('migrantstore', serial_trace(reads(*range(16), 64)), config)

        assert stats.migration_log[-1] == (64, 0)
        assert 4200 <= stats.migration_latencies[-1] <= 7800

    def test_fully_dirty_victim_energy(self, config):
        """Test a swap evicting a fully dirty page costs about 8000 nJ"""
        prefix = reads(0) + [('W', page_addr(0, 512 * k)) for k in range(16)] + reads(*range(1, 16))
        before = run('migrantstore', serial_trace(prefix), config)
        after = run('migrantstore', serial_trace(prefix + reads(64)), config)

        assert after.migration_log[-1] == (64, 0)
        assert after.pcm_eviction_bytes == PAGE
        dynamic = lambda s: s.energy.pcm_dynamic + s.energy.dram_dynamic
        assert 5600 <= dynamic(after) - dynamic(before) <= 10400

    def test_selective_update_ratio(self, config):
        """Test an 8 KB row rewrites 128 times the bytes of a 64 B selective write"""
        assert selective_update_ratio(config.devices.pcm) == 128


@pytest.mark.slow
class TestEnergyConservation:
    """Ledger replay over a long run"""

    def test_million_record_zipf(self, make_config):
        """Test the ledger equals the access-log replay exactly"""
        config = make_config({
            'trace': {'synthetic': {'records': 1_000_000, 'footprint_pages': 1024, 'seed': 11}},
            'devices': {'migrant_dram': {'row_bytes': 8192}},
            'migrantstore_capacity': 512 * PAGE,
            'os_quanta': {'capacity': 512 * PAGE},
        })
        stats = run('migrantstore', gen_synthetic(config.trace.synthetic), config)

        assert stats.l2_misses == 1_000_000
        assert stats.migrations_or_fills > 0
        check_conservation(stats, config)


class TestHysteresisTrend:
    """Threshold 16 against threshold 0 on a footprint four times the capacity"""

    def test_fewer_migrations_less_energy(self, make_config):
        """Test hysteresis cuts migrations below the unfiltered miss rate and saves energy"""
        config = zipf_config(make_config, footprint_pages=32, records=5000, write_fraction=0.2, seed=3)
        trace = gen_synthetic(config.trace.synthetic)

        filtered = run('migrantstore', trace, config.with_policy(threshold=16))
        unfiltered = run('migrantstore', trace, config.with_policy(threshold=0))

        assert filtered.migrations_per_l2_miss < unfiltered.dram_miss_rate
        assert filtered.energy.total < unfiltered.energy.total


class TestReplacementGap:
    """Random against RAPid-driven LRU"""

    @staticmethod
    def hot_set_with_stream(stream_pages=30, hot=6, threshold=16):
        """Every round touches the hot set, then the current stream page; each stream page
        gets enough rounds to migrate and be hit once"""
        accesses = []
        for s in range(stream_pages):
            for _ in range(threshold + 1):
                accesses += reads(*range(hot))
                accesses += reads(100 + s)
        return serial_trace(accesses)

    def test_random_is_slower(self, small_config):
        """
        Test random victims evict hot pages and cost cycles

        On a plain loop larger than MigrantStore every policy re-earns the same pages
        and random can beat LRU, so the trace keeps a hot set that LRU protects and
        random evicts, next to a stream of pages that each migrate once.
        """
        trace = self.hot_set_with_stream()
        lru = run('migrantstore', trace, small_config)
        rand = run('migrantstore', trace, small_config.with_policy(replacement=ReplacementPolicy.RANDOM))

        assert rand.total_cycles > lru.total_cycles

    def test_rapid_equals_perfect(self, small_config):
        """Test with few pages touched between migrations the victim sequences match"""
        trace = self.hot_set_with_stream()
        rapid = run('migrantstore', trace, small_config)
        perfect = run('migrantstore', trace, small_config.with_policy(replacement=ReplacementPolicy.PERFECT_LRU))

        assert len(rapid.migration_log) > small_config.migrantstore_capacity // PAGE
        assert rapid.migration_log == perfect.migration_log


class TestLruOracle:
    """Cache against the list-based LRU on random configurations"""

    def test_random_configs(self):
        """Test ten random geometries over ten thousand accesses each"""
        rng = np.random.default_rng(2024)
        for _ in range(10):
            num_sets = int(rng.integers(1, 9))
            associativity = int(rng.integers(1, 17))
            block_bytes = int(rng.choice([64, 512, 8192]))
            cache = SetAssociativeCache(CacheConfig(
                capacity=num_sets * associativity * block_bytes,
                block_bytes=block_bytes,
                associativity=associativity,
            ))
            oracle = ReferenceLru(num_sets, associativity, block_bytes)
            blocks = rng.integers(0, 4 * num_sets * associativity, size=10_000)

            for block in blocks.tolist():
                addr = block * block_bytes
                result = cache.lookup(addr)
                if result.hit:
                    observed = (True, None)
                else:
                    eviction = cache.fill(addr)
                    observed = (False, eviction.block_addr if eviction is not None else None)
                assert observed == oracle.access(addr)


class TestSubblockMonotonicity:
    """Smaller dirty granularity never writes more"""

    @pytest.mark.parametrize('generator', ['zipf', 'loop', 'phased'])
    def test_writeback_bytes(self, make_config, generator):
        """Test bytes(128) <= bytes(512) <= bytes(whole page)"""
        config = zipf_config(make_config, generator=generator, footprint_pages=24, records=4000,
                             write_fraction=0.4, touch_records=8, seed=5).with_policy(threshold=4)
        trace = gen_synthetic(config.trace.synthetic)

        written = [run('migrantstore', trace, config.with_policy(subblock_bytes=size)).pcm_writeback_bytes
                   for size in (128, 512, None)]

        assert written[0] <= written[1] <= written[2]
        assert written[2] > 0


class TestWear:
    """Lifetime consistency and wear direction"""

    def test_years_times_writes_constant(self, make_config, tmp_path):
        """Test years x max_writes agrees across schemes"""
        config = make_config({
            'schemes': ['pcm_base', 'pcm_only', 'hw_cache_seq', 'row_buffers', 'migrantstore'],
            'trace': {'synthetic': {'records': 3000, 'write_fraction': 0.3}},
        })
        _, path = ExperimentService().run_experiment(config, str(tmp_path))
        rows = json.loads(path.read_text())['rows']

        products = [row['lifetime_years'] * row['max_writes'] for row in rows
                    if row['max_writes'] and row['lifetime_years'] != 'inf']
        assert len(products) >= 3
        assert max(products) <= 1.1 * min(products)

    def test_migrantstore_wears_less_than_hw_cache(self, small_config):
        """Test hot written pages stay in MigrantStore while the hardware cache keeps writing them back"""
        accesses = []
        for r in range(60):
            accesses += [('W', page_addr(0)), ('W', page_addr(1))]
            accesses += reads(*range(1000 + 40 * r, 1040 + 40 * r))
        trace = serial_trace(accesses)

        migrant = run('migrantstore', trace, small_config)
        hw_cache = run('hw_cache_seq', trace, small_config)

        assert quantile_writes(migrant.wear) <= quantile_writes(hw_cache.wear)
        assert quantile_writes(migrant.wear) < 16

    def test_zipf_wear_at_matched_dram(self, make_config):
        """Test with equal DRAM capacity on a Zipf trace MigrantStore leaves PCM less worn"""
        config = make_config({
            'trace': {'synthetic': {'footprint_pages': 256, 'records': 40_000, 'write_fraction': 0.3}},
            'migrantstore_capacity': 32 * PAGE,
        })
        assert config.migrantstore_capacity == config.hw_cache.capacity
        trace = gen_synthetic(config.trace.synthetic)

        migrant = run('migrantstore', trace, config)
        hw_cache = run('hw_cache_seq', trace, config)

        assert quantile_writes(migrant.wear) < quantile_writes(hw_cache.wear)


class TestSchemeOrdering:
    """DRAM, MigrantStore and PCM on a trace whose footprint fits MigrantStore"""

    def test_cycles_and_busy_banks(self, make_config):
        """Test DramIdeal <= MigrantStore <= PcmOnly in cycles and PCM keeps more banks busy"""
        config = make_config({
            'trace': {'synthetic': {'footprint_pages': 64, 'records': 40_000, 'phases': 1, 'write_fraction': 0.2}},
            'devices': {'migrant_dram': {'row_bytes': 8192}},
            'migrantstore_capacity': 64 * PAGE,
            'os_quanta': {'capacity': 64 * PAGE},
        })
        trace = gen_synthetic(config.trace.synthetic)
        dram, migrant, pcm = (run(s, trace, config) for s in ('dram_ideal', 'migrantstore', 'pcm_only'))

        assert dram.total_cycles <= migrant.total_cycles <= pcm.total_cycles
        assert pcm.busy_bank_total > dram.busy_bank_total


class TestDeterminism:
    """Reruns give byte-identical reports"""

    def test_reports_identical(self, make_config, tmp_path):
        """Test two runs of the same config and seed write the same bytes"""
        config = make_config({
            'schemes': ['pcm_base', 'hw_cache_par', 'os_quanta_copy', 'migrantstore'],
            'trace': {'synthetic': {'records': 1500, 'num_cores': 2}},
        })
        for name in ('first', 'second'):
            ExperimentService().run_experiment(config, str(tmp_path / name))

        for report in ('report.json', 'report.csv'):
            assert (tmp_path / 'first' / report).read_bytes() == (tmp_path / 'second' / report).read_bytes()

    def test_tag_policies_agree(self, make_config):
        """Test sequential and parallel tag lookups fill identically on one core"""
        config = zipf_config(make_config, records=3000, footprint_pages=64)
        trace = gen_synthetic(config.trace.synthetic)
        seq, par = run('hw_cache_seq', trace, config), run('hw_cache_par', trace, config)

        assert seq.wear.counts == par.wear.counts
        assert seq.dram_hits == par.dram_hits
        assert seq.pcm_writeback_bytes == par.pcm_writeback_bytes
