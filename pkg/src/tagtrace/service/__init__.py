"""Operator-facing service: application core, HTTP API, CLI, config."""

from tagtrace.service.config import ConfigError, ServiceConfig, load_config
from tagtrace.service.core import AppCore

__all__ = [
    "AppCore",
    "ConfigError",
    "ServiceConfig",
    "load_config",
]
