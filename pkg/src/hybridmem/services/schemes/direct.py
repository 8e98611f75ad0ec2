"""Single-device schemes: every event goes straight to one memory"""
from typing import Optional

from ...models.experiment import ExperimentConfig, SchemeId
from .base import Scheme


class DirectScheme(Scheme):
    """Reads stall for the device; writebacks only for admission backpressure"""

    counts_as_miss = True

    def __init__(self, config: ExperimentConfig, seed: int = 0, record_log: bool = False):
        super().__init__(config, seed, record_log)
        self.device = self.add_device(self.device_geometry(config))

    def device_geometry(self, config: ExperimentConfig):
        raise NotImplementedError

    def _count(self) -> None:
        if self.counts_as_miss:
            self.dram_misses += 1
        else:
            self.dram_hits += 1

    def read_miss(self, core: int, addr: int, now: int) -> Optional[int]:
        self._count()
        return self.device.read(addr, now).completion

    def writeback(self, core: int, addr: int, now: int) -> Optional[int]:
        self._count()
        return self.device.write(addr, now).admitted


class PcmOnlyScheme(DirectScheme):
    scheme_id = SchemeId.PCM_ONLY

    def device_geometry(self, config):
        return config.devices.pcm


class DramIdealScheme(DirectScheme):
    scheme_id = SchemeId.DRAM_IDEAL
    counts_as_miss = False

    def device_geometry(self, config):
        return config.devices.base_dram
