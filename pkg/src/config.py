"""
Lab configuration settings
"""
import os
from typing import Any, Dict, Optional

from dotenv import dotenv_values, load_dotenv

from src.exceptions import ConfigError
from src.models.run_config import RunConfig

CONVERTERS = {
    'M': float,
    'K': float,
    'seed': int,
    'steps': int,
    'horizon': int,
    'format': str,
    'out': str,
}


class LabConfig:
    @staticmethod
    def get_config() -> Dict[str, Any]:
        """
        Get lab configuration settings.
        Environment variables override the built-in defaults.
        """
        # Make sure we can find the .env file one directory up
        dotenv_path = os.path.join(os.path.dirname(__file__), '..', '.env')
        load_dotenv(dotenv_path)

        return {
            # Construction parameters
            'M': os.getenv('KAKUTANI_M', '5'),
            'K': os.getenv('KAKUTANI_K', '3'),

            # Run sizes
            'seed': os.getenv('KAKUTANI_SEED', '7'),
            'steps': os.getenv('KAKUTANI_STEPS', '20000'),
            'horizon': os.getenv('KAKUTANI_HORIZON', '512'),

            # Output (empty path means stdout)
            'format': os.getenv('KAKUTANI_FORMAT', 'csv'),
            'out': os.getenv('KAKUTANI_OUTPUT', ''),

            'log_level': os.getenv('LOG_LEVEL', 'WARNING'),
        }


def _convert(key: str, value: Any, source: str) -> Any:
    if key == 'out':
        return value or None
    try:
        return CONVERTERS[key](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: cannot parse {key}={value!r}") from exc


def read_config_file(path: str) -> Dict[str, Any]:
    """Flat key=value run configuration; unknown keys are rejected"""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values = dotenv_values(path)
    unknown = sorted(set(values) - set(RunConfig.keys()))
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")
    return {key: _convert(key, value, path) for key, value in values.items()}


def load_run_config(path: Optional[str] = None,
                    overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Merge defaults, environment, config file and flags, later sources winning"""
    env = LabConfig.get_config()
    merged = {key: _convert(key, env[key], 'environment') for key in RunConfig.keys()}
    if path:
        merged.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return RunConfig(**merged)
