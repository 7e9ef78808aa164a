"""
GAPFORGE Configuration Module

Handles work budgets, search policy and paths.
Settings are read from keyword overrides, the environment, a .env file and
finally $GAPFORGE_HOME/config.json.
"""

import json
import os
from pathlib import Path
from typing import Literal, Tuple, Type

from pydantic import Field
from pydantic_settings import (
    BaseSettings,
    JsonConfigSettingsSource,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)


# =============================================================================
# Path Configuration (Cross-platform)
# =============================================================================

def get_gapforge_dir() -> Path:
    """Get the GAPFORGE data directory path (not created here)."""
    # Use GAPFORGE_HOME env var if set, otherwise default to ~/.gapforge
    home = os.environ.get("GAPFORGE_HOME")
    if home:
        return Path(home)
    return Path.home() / ".gapforge"


GAPFORGE_DIR = get_gapforge_dir()
CONFIG_PATH = GAPFORGE_DIR / "config.json"


# =============================================================================
# Default Configuration Values
# =============================================================================

DEFAULT_THREADS = 0                      # 0 = one worker per CPU
DEFAULT_MR_ROUNDS = 64
DEFAULT_MAX_CANDIDATES = 20_000
DEFAULT_AUDIT_EXHAUSTIVE_BUDGET = 10**6  # C(s/2, r) at or below this -> exhaustive
DEFAULT_AUDIT_SAMPLES = 10**6            # random subset pairs otherwise
DEFAULT_WITNESS_BUDGET = 4096
DEFAULT_ORACLE_BUDGET = 10**7            # max p^(k+1) for brute-force oracles
DEFAULT_SIEVE_LIMIT = 10**8
DEFAULT_FACTOR_BITS_BUDGET = 256
DEFAULT_LOG_LEVEL = "WARNING"


# =============================================================================
# Configuration Model
# =============================================================================

class Settings(BaseSettings):
    """Runtime settings with validation."""

    model_config = SettingsConfigDict(
        env_prefix="GAPFORGE_",
        env_file=".env",
        env_file_encoding="utf-8",
        json_file=CONFIG_PATH,
        extra="ignore",
    )

    threads: int = Field(default=DEFAULT_THREADS, ge=0)
    mr_rounds: int = Field(default=DEFAULT_MR_ROUNDS, ge=1)
    max_candidates: int = Field(default=DEFAULT_MAX_CANDIDATES, ge=0)
    prime_strategy: Literal["random", "sequential"] = Field(default="random")
    audit_exhaustive_budget: int = Field(default=DEFAULT_AUDIT_EXHAUSTIVE_BUDGET, ge=0)
    audit_samples: int = Field(default=DEFAULT_AUDIT_SAMPLES, ge=0)
    witness_budget: int = Field(default=DEFAULT_WITNESS_BUDGET, ge=1)
    oracle_budget: int = Field(default=DEFAULT_ORACLE_BUDGET, ge=1)
    sieve_limit: int = Field(default=DEFAULT_SIEVE_LIMIT, ge=2)
    factor_bits_budget: int = Field(default=DEFAULT_FACTOR_BITS_BUDGET, ge=1)
    log_level: str = Field(default=DEFAULT_LOG_LEVEL)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # config.json sits below the environment
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            JsonConfigSettingsSource(settings_cls),
            file_secret_settings,
        )

    @property
    def worker_count(self) -> int:
        """Resolved worker count (threads=0 means one per CPU)."""
        return self.threads or (os.cpu_count() or 1)


# =============================================================================
# Configuration Functions
# =============================================================================

def load_settings(**overrides) -> Settings:
    """Load settings. Keyword overrides (CLI flags) win; None values are ignored."""
    return Settings(**{key: value for key, value in overrides.items() if value is not None})


def save_settings(settings: Settings, path: Path = CONFIG_PATH) -> Path:
    """Persist settings as JSON. Returns the path written."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(settings.model_dump(), f, indent=2, ensure_ascii=False)
    return path
