"""
Configuration management module for the HCCA TXOP simulator.

This module provides a centralized configuration class that loads process
settings from environment variables (optionally from a .env file) and
provides sensible defaults. Simulation semantics live in scenario files;
the settings here only control output location, parallelism, the fallback
seed and log verbosity.
"""

import os
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv

from utils.exceptions import ConfigurationError

# Load environment variables from .env file if it exists
env_path = Path(__file__).parent.parent / '.env'
if env_path.exists():
    load_dotenv(env_path)


def _int_env(key: str, default: str) -> int:
    raw = os.getenv(key, default)
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(config_key=key, message=f"expected an integer, got '{raw}'") from e


class Config:
    """
    Centralized configuration management for the simulator.

    This class provides a single source of truth for process-level settings,
    with sensible defaults and easy customization via environment variables.
    """

    # ========== Logging ==========
    @staticmethod
    def get_log_level() -> str:
        """Get the root logging level (DEBUG, INFO, WARNING, ...)."""
        return os.getenv('LOG_LEVEL', 'INFO').upper()

    # ========== Output ==========
    @staticmethod
    def get_output_dir() -> str:
        """Get the default directory CSV results are written to."""
        return os.getenv('OUTPUT_DIR', 'results')

    # ========== Simulation ==========
    @staticmethod
    def get_default_seed() -> int:
        """Get the seed used when a scenario file does not set one."""
        return _int_env('DEFAULT_SEED', '1')

    @staticmethod
    def get_sweep_workers() -> int:
        """Get the number of worker processes used by the sweep command."""
        workers = _int_env('SWEEP_WORKERS', '1')
        if workers < 1:
            raise ConfigurationError(config_key='SWEEP_WORKERS', message="must be at least 1")
        return workers

    # ========== Test Execution Settings ==========
    @staticmethod
    def get_pytest_workers() -> str:
        """Get number of pytest workers for parallel execution."""
        return os.getenv('PYTEST_WORKERS', 'auto')

    # ========== Helper Methods ==========
    @staticmethod
    def get_all_config() -> Dict[str, Any]:
        """
        Get all configuration as a dictionary.

        Useful for debugging and logging configuration state.
        """
        return {
            'log_level': Config.get_log_level(),
            'output_dir': Config.get_output_dir(),
            'default_seed': Config.get_default_seed(),
            'sweep_workers': Config.get_sweep_workers(),
            'pytest_workers': Config.get_pytest_workers(),
        }
