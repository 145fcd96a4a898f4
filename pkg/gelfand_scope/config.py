from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import BaseSettings, Field, ValidationError, validator

from .errors import UsageError


@dataclass(frozen=True)
class Caps:
    """Resource caps shared by every pipeline."""

    closure: int = 2_000_000
    lattice: int = 500
    oracle: int = 5000
    double_coset: int = 100_000
    table_classes: int = 60
    table_order: int = 100_000

    def merged(self, **overrides: Optional[int]) -> "Caps":
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        for name, value in overrides.items():
            if value is None:
                continue
            if name not in values:
                raise ValueError(f"Unknown cap: {name}")
            if value < 1:
                raise ValueError(f"Cap {name} must be positive, got {value}")
            values[name] = int(value)
        return Caps(**values)


def parse_caps(value: str | None) -> dict[str, int]:
    """Parse ``closure=100,lattice=200`` into a mapping."""
    if not value:
        return {}
    result: dict[str, int] = {}
    for chunk in value.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ValueError(f"Malformed cap entry: {chunk!r}")
        name, raw = chunk.split("=", 1)
        name = name.strip().replace("-", "_")
        try:
            result[name] = int(raw.strip())
        except ValueError as exc:
            raise ValueError(f"Cap {name} is not an integer: {raw!r}") from exc
    return result


class Settings(BaseSettings):
    """Toolkit configuration loaded from environment variables."""

    # General
    app_name: str = Field(default="gelfand-scope")
    log_level: str = Field(default="WARNING")

    # Caps, overridable one by one or through GELFAND_SCOPE_CAPS
    closure_cap: int = Field(default=2_000_000, ge=1)
    lattice_cap: int = Field(default=500, ge=1)
    oracle_cap: int = Field(default=5000, ge=1)
    double_coset_cap: int = Field(default=100_000, ge=1)
    table_class_cap: int = Field(default=60, ge=1)
    table_order_cap: int = Field(default=100_000, ge=1)
    caps_override: Optional[str] = Field(default=None, env="GELFAND_SCOPE_CAPS")

    # Character table cache, disabled unless a URL is given
    cache_url: Optional[str] = Field(default=None)

    class Config:
        env_prefix = "GELFAND_SCOPE_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False

    @validator("cache_url", pre=True)
    def _expand_sqlite_path(cls, value: str | None) -> str | None:
        if value in (None, ""):
            return None
        if value.startswith("sqlite") and "///" in value and "?" not in value:
            path = value.split("///", 1)[1]
            if path and path != ":memory:":
                expanded = Path(os.path.expandvars(path)).expanduser()
                return f"sqlite:///{expanded}"
        return value

    @validator("log_level", pre=True)
    def _normalize_log_level(cls, value: str | None) -> str:
        if value in (None, ""):
            return "WARNING"
        level = str(value).upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {value}")
        return level

    @validator("caps_override")
    def _validate_caps_override(cls, value: str | None) -> str | None:
        parsed = parse_caps(value)
        Caps().merged(**parsed)
        return value

    def caps(self) -> Caps:
        base = Caps(
            closure=self.closure_cap,
            lattice=self.lattice_cap,
            oracle=self.oracle_cap,
            double_coset=self.double_coset_cap,
            table_classes=self.table_class_cap,
            table_order=self.table_order_cap,
        )
        return base.merged(**parse_caps(self.caps_override))


@lru_cache
def get_settings() -> Settings:
    """Environment settings, read on first use; invalid values are usage errors."""
    try:
        return Settings()
    except ValidationError as exc:
        raise UsageError(f"Invalid environment settings: {exc}") from exc
