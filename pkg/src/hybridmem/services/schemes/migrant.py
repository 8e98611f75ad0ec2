"""MigrantStore scheme: PCM plus an OS-managed DRAM region"""
from typing import List, Optional

from ...models.experiment import ExperimentConfig, SchemeId
from ..migrantstore import MigrantStoreController
from .base import Scheme


class MigrantStoreScheme(Scheme):
    scheme_id = SchemeId.MIGRANTSTORE

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        super().__init__(config, seed, record_log)
        self.pcm_device = self.add_device(config.devices.pcm)
        self.dram = self.add_device(config.migrant_dram_geometry())
        self.controller: Optional[MigrantStoreController] = None

    def on_bind(self) -> None:
        config = self.config
        self.controller = MigrantStoreController(
            sim=self.sim,
            dma=self.dma,
            pcm=self.pcm_device,
            dram=self.dram,
            policy=config.policy,
            page_bytes=config.page_bytes,
            capacity_pages=config.migrantstore_capacity // config.page_bytes,
            seed=self.seed,
            verify=config.verify,
        )

    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        return self.controller.on_read_miss(core, addr, now)

    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        return self.controller.on_writeback(core, addr, now)

    def finalize(self) -> None:
        controller = self.controller
        self.dram_hits = controller.dram_hits
        self.dram_misses = controller.dram_misses
        self.fills = controller.migrations
        self.software_events = controller.migrations
        self.sram_events.clear()
        if controller.rapid.inserts:
            self.charge_sram(self.config.policy.rapid_insert_energy_nj, controller.rapid.inserts)
        if self.config.verify:
            controller.check_invariants()

    def migration_latencies(self) -> List[int]:
        return list(self.controller.migration_latencies)

    def migration_log(self) -> list:
        return list(self.controller.migration_log)
