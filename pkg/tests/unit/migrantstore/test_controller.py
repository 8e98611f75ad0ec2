"""Unit tests for the MigrantStore controller"""
import pytest

from hybridmem.models.experiment import MigrateOn, ReplacementPolicy
from hybridmem.services.exceptions import InvariantViolation
from hybridmem.services.metrics import check_conservation
from hybridmem.services.schemes import build_scheme, run
from hybridmem.services.simulation import Simulator
from hybridmem.services.trace_service import gen_synthetic

from tests.fixtures.sample_data import page_addr, records, serial_trace

pytestmark = pytest.mark.unit


def simulate(config, trace):
    """Run MigrantStore and hand back the scheme with its stats"""
    scheme = build_scheme('migrantstore', config)
    sim = Simulator(scheme, trace)
    cycles = sim.run()
    scheme.finalize()
    return scheme, scheme.collect(sim, cycles)


def reads(page, count):
    return [('R', page_addr(page, 64 * i)) for i in range(count)]


def pcm_reads(stats):
    return sum(n for (kind, _, _), n in stats.access_logs['pcm'].items() if kind == 'read')


class TestHysteresis:
    """Test cases for the migration threshold"""

    def test_below_threshold_stays_in_pcm(self, small_config):
        """Test 15 misses under threshold 16 give 15 PCM reads and no migration"""
        scheme, stats = simulate(small_config, serial_trace(reads(5, 15)))

        assert stats.migrations_or_fills == 0
        assert stats.dram_misses == 15
        assert pcm_reads(stats) == 15
        assert scheme.controller.table[5].hysteresis_count == 15

    def test_threshold_miss_migrates(self, small_config):
        """Test the sixteenth miss migrates the page without its own demand read"""
        scheme, stats = simulate(small_config, serial_trace(reads(5, 16)))

        assert stats.migrations_or_fills == 1
        assert pcm_reads(stats) == 15 + 128
        assert scheme.controller.table[5].resident
        assert stats.migration_log == [(5, None)]

    def test_resident_read_is_dram_hit(self, small_config):
        """Test a resident page is served by DRAM with no count change"""
        scheme, stats = simulate(small_config, serial_trace(reads(5, 17)))

        assert stats.dram_hits == 1
        assert stats.migrations_or_fills == 1
        assert scheme.controller.table[5].subblock_dirty_mask == 0

    def test_threshold_zero_migrates_first_miss(self, small_config):
        """Test threshold 0 disables hysteresis"""
        _, stats = simulate(small_config.with_policy(threshold=0), serial_trace(reads(5, 1)))
        assert stats.migrations_or_fills == 1

    def test_count_saturates_at_threshold(self, small_config):
        """Test the count never passes the threshold while no frame can be freed"""
        config = small_config.with_policy(threshold=2)
        scheme = build_scheme('migrantstore', config)
        Simulator(scheme, [])
        controller = scheme.controller
        pte = controller.table.entry(1)
        for _ in range(5):
            controller._count_miss(pte)
        assert pte.hysteresis_count == 2

    def test_writes_only(self, small_config):
        """Test writes_only ignores read misses when counting"""
        config = small_config.with_policy(threshold=1, migrate_on=MigrateOn.WRITES_ONLY)
        _, stats = simulate(config, serial_trace(reads(5, 4) + [('W', page_addr(6))]))

        assert stats.migrations_or_fills == 1
        assert stats.migration_log == [(6, None)]

    def test_writebacks_not_counted(self, small_config):
        """Test count_writebacks off leaves writebacks in PCM"""
        config = small_config.with_policy(threshold=1, count_writebacks=False)
        _, stats = simulate(config, serial_trace([('W', page_addr(6, 64 * i)) for i in range(4)]))

        assert stats.migrations_or_fills == 0
        assert stats.pcm_direct_write_bytes == 4 * 64


class TestWritebacks:
    """Test cases for writebacks"""

    @pytest.mark.parametrize('offset,bit', [(0, 0), (4096, 8), (600 - 600 % 64, 1)])
    def test_resident_write_sets_dirty_bit(self, small_config, offset, bit):
        """Test a resident writeback dirties its 512 B sub-block"""
        config = small_config.with_policy(threshold=1)
        scheme, _ = simulate(config, serial_trace([('R', page_addr(3)), ('W', page_addr(3, offset))]))
        assert scheme.controller.table[3].subblock_dirty_mask == 1 << bit

    def test_pcm_write_energy(self, small_config):
        """Test a writeback to a PCM page costs one 36 nJ selective write"""
        _, stats = simulate(small_config, serial_trace([('W', page_addr(2))]))

        assert stats.energy.pcm_dynamic_pj == 36_000
        assert stats.wear.counts[page_addr(2) // 64] == 1

    def test_write_triggering_migration_lands_in_dram(self, small_config):
        """Test a threshold-crossing writeback is applied after the page moves"""
        config = small_config.with_policy(threshold=1)
        scheme, stats = simulate(config, serial_trace([('W', page_addr(4, 1024))]))

        assert scheme.controller.table[4].subblock_dirty_mask == 1 << 2
        assert stats.pcm_direct_write_bytes == 0


class TestMigration:
    """Test cases for page migration"""

    def test_core_waits_for_dma_and_software(self, small_config):
        """Test the triggering core resumes after the copy plus 5000 cycles"""
        config = small_config.with_policy(threshold=1)
        _, stats = simulate(config, serial_trace([('R', page_addr(1))], start=100))

        assert stats.core_cycles == [100 + stats.migration_latencies[0] + 5000]
        assert stats.energy.software_pj == 3_000_000

    def test_random_skips_stack_update_cost(self, small_config):
        """Test random victims pay only the handler cost without the list scan"""
        trace = serial_trace([('R', page_addr(p)) for p in range(12)])
        lru = small_config.with_policy(threshold=1)
        rand = small_config.with_policy(threshold=1, replacement=ReplacementPolicy.RANDOM)

        _, lru_stats = simulate(lru, trace)
        _, rand_stats = simulate(rand, trace)

        assert lru_stats.software_events == rand_stats.software_events == 12
        assert lru_stats.energy.software_pj == 12 * 3_000_000
        assert rand_stats.energy.software_pj == 12 * 1_000_000
        assert rand_stats.core_cycles[0] < lru_stats.core_cycles[0]
        check_conservation(rand_stats, rand)

    def test_clean_victim_writes_nothing(self, small_config):
        """Test evicting a clean page writes nothing to PCM"""
        config = small_config.with_policy(threshold=1)
        _, stats = simulate(config, serial_trace([('R', page_addr(p)) for p in range(9)]))

        assert stats.migrations_or_fills == 9
        assert stats.migration_log[-1] == (8, 0)
        assert stats.pcm_eviction_bytes == 0
        assert not any(kind == 'write_subblock' for kind, _, _ in stats.access_logs['pcm'])

    def test_dirty_victim_merges_subblocks(self, small_config):
        """Test only the victim's dirty sub-blocks reach its stale PCM copy"""
        config = small_config.with_policy(threshold=1)
        accesses = [('R', page_addr(0)), ('W', page_addr(0)), ('W', page_addr(0, 4096))]
        accesses += [('R', page_addr(p)) for p in range(1, 9)]
        _, stats = simulate(config, serial_trace(accesses))

        assert stats.migration_log[-1] == (8, 0)
        assert stats.pcm_eviction_bytes == 1024
        touched = {block for block, n in stats.wear.counts.items() if n}
        assert touched == set(range(8)) | set(range(64, 72))

    def test_waiting_read_replays_as_hit(self, small_config):
        """Test a read to a page in transit waits and then hits in DRAM"""
        config = small_config.with_policy(threshold=1)
        trace = records((100, 0, 'R', page_addr(1)), (200, 1, 'R', page_addr(1, 64)))
        _, stats = simulate(config, trace)

        assert stats.migrations_or_fills == 1
        assert stats.dram_hits == 1
        migration_done = 100 + stats.migration_latencies[0]
        assert stats.core_cycles[1] > migration_done

    def test_waiting_writeback_is_deferred(self, small_config):
        """Test a writeback to a page in transit is applied after the migration"""
        config = small_config.with_policy(threshold=1)
        trace = records((100, 0, 'R', page_addr(1)), (200, 1, 'W', page_addr(1, 512)))
        scheme, stats = simulate(config, trace)

        assert scheme.controller.table[1].subblock_dirty_mask == 1 << 1
        assert stats.core_cycles[1] == 200
        assert stats.pcm_direct_write_bytes == 0

    def test_verify_mode_passes_on_zipf(self, small_config):
        """Test the checked run keeps every invariant and conserves energy"""
        config = small_config.with_updates(verify=True).with_policy(threshold=2)
        trace = gen_synthetic(config.trace.synthetic)

        stats = run('migrantstore', trace, config)

        assert stats.migrations_or_fills > 8
        check_conservation(stats, config)

    def test_verify_rejects_early_migration(self, small_config):
        """Test verify mode refuses a migration before the threshold"""
        scheme = build_scheme('migrantstore', small_config.with_updates(verify=True))
        Simulator(scheme, [])
        with pytest.raises(InvariantViolation, match="hysteresis"):
            scheme.controller.trigger_migration(7, 0)

    def test_resident_page_cannot_migrate(self, small_config):
        """Test migrating a resident page is an invariant violation"""
        config = small_config.with_policy(threshold=1)
        scheme, _ = simulate(config, serial_trace([('R', page_addr(2))]))
        with pytest.raises(InvariantViolation):
            scheme.controller.trigger_migration(2, 10**9)


class TestReplacement:
    """Test cases for replacement policies"""

    def hot_and_cold(self):
        accesses = []
        for round_ in range(12):
            accesses += [('R', page_addr(p)) for p in range(6)]
            accesses.append(('R', page_addr(100 + round_)))
        return serial_trace(accesses)

    def test_rapid_matches_perfect_lru(self, small_config):
        """Test RapidLru evicts exactly like PerfectLru when few pages are touched between migrations"""
        trace = self.hot_and_cold()
        rapid = small_config.with_policy(threshold=1, replacement=ReplacementPolicy.RAPID_LRU)
        perfect = small_config.with_policy(threshold=1, replacement=ReplacementPolicy.PERFECT_LRU)

        assert run('migrantstore', trace, rapid).migration_log == run('migrantstore', trace, perfect).migration_log

    def test_rapid_insert_energy(self, small_config):
        """Test RAPid inserts are charged only under RapidLru"""
        trace = self.hot_and_cold()
        rapid = run('migrantstore', trace, small_config.with_policy(threshold=1))
        perfect = run('migrantstore', trace, small_config.with_policy(
            threshold=1, replacement=ReplacementPolicy.PERFECT_LRU))

        assert rapid.sram_events == {0.025: rapid.dram_hits}
        assert perfect.energy.sram_dynamic_pj == 0

    def test_random_is_reproducible(self, small_config):
        """Test the same seed replays the same random victims"""
        trace = self.hot_and_cold()
        config = small_config.with_policy(threshold=1, replacement=ReplacementPolicy.RANDOM)

        first = run('migrantstore', trace, config, seed=3)
        second = run('migrantstore', trace, config, seed=3)

        assert first.migration_log == second.migration_log
        assert len(first.migration_log) > 8
