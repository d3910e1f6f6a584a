"""Configuration management for the sampler."""

import logging
import os
from typing import Optional

from ..domain.exceptions import ConfigurationError


class Config:
    """Environment-driven defaults; command-line flags override them."""

    SEED: Optional[int]
    JOBS: int
    ORACLE_LIMIT: int
    HISTOGRAM_BINS: int
    LOG_LEVEL: str

    def __init__(self) -> None:
        """Initialize configuration from environment variables."""
        seed = self._get_optional_env("JDM_SAMPLER_SEED")
        self.SEED = self._to_int("JDM_SAMPLER_SEED", seed) if seed else None
        self.JOBS = self._get_positive_int("JDM_SAMPLER_JOBS", "1")
        self.ORACLE_LIMIT = self._get_positive_int("JDM_SAMPLER_ORACLE_LIMIT", "10")
        self.HISTOGRAM_BINS = self._get_positive_int("JDM_SAMPLER_HISTOGRAM_BINS", "50")
        self.LOG_LEVEL = self._get_optional_env("JDM_SAMPLER_LOG_LEVEL", "WARNING").upper()
        if not isinstance(logging.getLevelName(self.LOG_LEVEL), int):
            raise ConfigurationError(f"JDM_SAMPLER_LOG_LEVEL: unknown level {self.LOG_LEVEL!r}")

    def _get_optional_env(self, key: str, default: str = "") -> str:
        """Get optional environment variable with default.

        Args:
            key: Environment variable name
            default: Default value if not set

        Returns:
            Environment variable value or default
        """
        return os.getenv(key, default)

    def _get_positive_int(self, key: str, default: str) -> int:
        """Get an integer environment variable that must be at least 1.

        Raises:
            ConfigurationError: If the value is not a positive integer
        """
        value = self._to_int(key, self._get_optional_env(key, default))
        if value < 1:
            raise ConfigurationError(f"{key} must be at least 1, got {value}")
        return value

    @staticmethod
    def _to_int(key: str, raw: str) -> int:
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigurationError(f"{key} is not an integer: {raw!r}") from e
