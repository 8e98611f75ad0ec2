"""Experiment configuration loading: YAML defaults merged with a JSON file"""
import json
import logging
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml
from pydantic import ValidationError

from ..models.experiment import ExperimentConfig
from ..services.exceptions import ConfigurationError
from .validation import ConfigValidator

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / 'defaults.yaml'


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursively merge mappings; lists and scalars in override replace base"""
    merged = deepcopy(dict(base))
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = deepcopy(value)
    return merged


class ExperimentConfigLoader:
    """Builds validated ExperimentConfig objects"""

    def __init__(self, defaults_path: Optional[str] = None):
        self.defaults_path = Path(defaults_path) if defaults_path else DEFAULTS_PATH
        self._defaults: Optional[Dict[str, Any]] = None

    @property
    def defaults(self) -> Dict[str, Any]:
        if self._defaults is None:
            try:
                with open(self.defaults_path, 'r', encoding='utf-8') as f:
                    self._defaults = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                raise ConfigurationError(f"Cannot load defaults from {self.defaults_path}: {e}") from e
        return self._defaults

    def load(self, path: str, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
        """Read a JSON experiment config from disk"""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigurationError(f"Cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON in {path}: {e}") from e

        if not isinstance(data, dict):
            raise ConfigurationError(f"Config {path} must be a JSON object")

        trace = data.get('trace')
        if isinstance(trace, dict) and trace.get('path'):
            trace_path = Path(trace['path'])
            if not trace_path.is_absolute():
                data = deep_merge(data, {'trace': {'path': str(Path(path).parent / trace_path)}})

        config = self.from_dict(data, overrides)
        logger.info(f"Loaded experiment config from {path}")
        return config

    def from_dict(self, data: Mapping[str, Any],
                  overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
        """Merge data over the defaults and validate"""
        merged = deep_merge(self.defaults, data)
        if overrides:
            merged = deep_merge(merged, overrides)

        try:
            config = ExperimentConfig.model_validate(merged)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid experiment config: {e}") from e

        result = ConfigValidator.validate_experiment(config)
        if not result['valid']:
            raise ConfigurationError(f"Experiment config validation failed: {'; '.join(result['errors'])}")
        for warning in result['warnings']:
            logger.warning(f"Configuration warning: {warning}")
        return config
