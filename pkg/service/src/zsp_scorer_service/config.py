"""Service configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MODEL = "roberta-large-mnli"


@dataclass(frozen=True)
class ServiceConfig:
    model: str = DEFAULT_MODEL
    host: str = "127.0.0.1"
    port: int = 8400
    max_batch_size: int = 32
    device: str | None = None  # None lets the backend pick

    def __post_init__(self):
        if self.max_batch_size < 1:
            raise ValueError("max_batch_size must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        """Environment defaults, overridable by keyword (CLI flags)."""
        values = {
            "model": os.environ.get("ZSP_SERVICE_MODEL", DEFAULT_MODEL),
            "host": os.environ.get("ZSP_SERVICE_HOST", "127.0.0.1"),
            "port": int(os.environ.get("ZSP_SERVICE_PORT", "8400")),
            "max_batch_size": int(os.environ.get("ZSP_SERVICE_MAX_BATCH", "32")),
            "device": os.environ.get("ZSP_SERVICE_DEVICE") or None,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
