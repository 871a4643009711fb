"""
Run configuration for primon.

Values come from (highest first) explicit CLI flags, ``PRIMON_*`` environment
variables and the defaults below. ``PRIMON_CACHE`` names the prime-table cache.
"""

from __future__ import annotations

import os
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PRIMON_", extra="forbid", populate_by_name=True)

    precision_bits: int = Field(128, ge=53, description="XReal mantissa precision in bits")
    quadrature_tolerance: float = Field(1e-20, gt=0, description="Absolute quadrature tolerance")
    prime_cache_path: Optional[Path] = Field(
        None,
        validation_alias=AliasChoices("prime_cache_path", "PRIMON_CACHE"),
        description="Prime-table cache file",
    )
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[Path] = Field(None, description="Write the report here instead of stdout")
    thread_count: int = Field(0, ge=0, description="Worker threads, 0 = auto")
    significant_digits: int = Field(20, ge=5, le=60)
    sieve_cap: int = Field(10**8, ge=1)
    segment_size: int = Field(2**20, ge=1024)
    log_level: str = "WARNING"

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """A validated copy of this config with ``overrides`` (field names) on top."""
        return type(self)(**{**self.model_dump(), **overrides})

    def workers(self) -> int:
        if self.thread_count:
            return self.thread_count
        return min(8, os.cpu_count() or 1)
