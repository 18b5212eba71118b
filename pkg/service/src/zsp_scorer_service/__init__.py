"""Entailment scoring sidecar for the zsp classifier."""

from .app import create_app
from .config import DEFAULT_MODEL, ServiceConfig

__all__ = ["DEFAULT_MODEL", "ServiceConfig", "create_app"]
