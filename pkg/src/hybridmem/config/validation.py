"""Configuration validation utilities"""
import logging
from typing import Any, Dict, List, Optional

from ..models.experiment import ExperimentConfig, SchemeId

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


class ConfigValidator:
    """Cross-field checks that single-model validation cannot express"""

    @staticmethod
    def validate_logging_config(config: object) -> List[str]:
        errors = []
        log_level = getattr(config, 'LOG_LEVEL', None)
        if log_level and log_level.upper() not in VALID_LOG_LEVELS:
            errors.append(f"LOG_LEVEL must be one of: {', '.join(VALID_LOG_LEVELS)}")
        return errors

    @classmethod
    def validate_runtime(cls, config: object, environment: Optional[str] = None) -> Dict[str, Any]:
        """Validate a runtime profile (logging, jobs)"""
        errors = cls.validate_logging_config(config)
        warnings = []
        if environment == 'production' and getattr(config, 'DEBUG', False):
            warnings.append("DEBUG mode should be disabled in production")

        if errors:
            logger.error(f"Runtime configuration validation failed: {errors}")
        if warnings:
            logger.warning(f"Runtime configuration warnings: {warnings}")
        return {'valid': not errors, 'errors': errors, 'warnings': warnings, 'environment': environment}

    @staticmethod
    def validate_geometry(config: ExperimentConfig) -> List[str]:
        """
        Check that regions fit their devices and pages tile every layout

        Args:
            config: Experiment configuration to validate

        Returns:
            List of validation error messages
        """
        errors = []
        page = config.page_bytes
        if page % 64:
            errors.append("page_bytes must be a multiple of 64")

        pcm = config.devices.pcm
        if config.devices.base_dram.capacity < pcm.capacity:
            errors.append("base_dram capacity must cover the PCM address space")

        ms = config.devices.migrant_dram
        for name, capacity in (('migrantstore_capacity', config.migrantstore_capacity),
                               ('os_quanta.capacity', config.os_quanta.capacity)):
            if capacity % page:
                errors.append(f"{name} must be a multiple of page_bytes")
            if capacity % (ms.num_banks * ms.row_bytes):
                errors.append(f"{name} must be divisible by migrant_dram num_banks x row_bytes")
        for capacity in config.ablation.capacities:
            if capacity % page or capacity % (ms.num_banks * ms.row_bytes):
                errors.append(f"ablation capacity {capacity} does not tile the MigrantStore DRAM")

        for name in ('hw_cache_seq', 'hw_cache_par'):
            dev = getattr(config.devices, name)
            if dev.capacity < config.hw_cache.capacity:
                errors.append(f"{name} device is smaller than the hardware cache")

        if config.hw_cache.block_bytes != page:
            errors.append("hw_cache.block_bytes must equal page_bytes")

        rb = config.row_buffers
        if pcm.row_bytes % rb.bytes:
            errors.append("row_buffers.bytes must divide the PCM row size")

        sizes = [config.policy.subblock_bytes] + list(config.ablation.subblocks)
        for size in sizes:
            if size is not None and (page % size or size % 64):
                errors.append(f"sub-block size {size} must be a multiple of 64 dividing page_bytes")
        return errors

    @staticmethod
    def validate_trace_source(config: ExperimentConfig) -> List[str]:
        errors = []
        spec = config.trace.synthetic
        if spec is not None:
            top = (spec.base_page + spec.footprint_pages * spec.phases) * spec.page_bytes
            if top > config.devices.pcm.capacity:
                errors.append("synthetic footprint exceeds PCM capacity")
            if spec.page_bytes != config.page_bytes:
                errors.append("trace.synthetic.page_bytes must equal page_bytes")
        return errors

    @classmethod
    def validate_experiment(cls, config: ExperimentConfig) -> Dict[str, Any]:
        """
        Comprehensive experiment validation

        Returns:
            Dictionary with validation results
        """
        errors = []
        warnings = []
        errors.extend(cls.validate_geometry(config))
        errors.extend(cls.validate_trace_source(config))

        if not config.schemes:
            errors.append("at least one scheme is required")
        elif len(set(config.schemes)) != len(config.schemes):
            errors.append("schemes must not repeat")
        elif SchemeId.PCM_BASE not in config.schemes:
            warnings.append("pcm_base not selected: reports will carry absolute values only")

        if errors:
            logger.error(f"Experiment configuration validation failed: {errors}")
        if warnings:
            logger.warning(f"Experiment configuration warnings: {warnings}")

        return {'valid': not errors, 'errors': errors, 'warnings': warnings}
