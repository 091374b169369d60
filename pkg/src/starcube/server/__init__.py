"""HTTP delivery layer."""

from .app import EngineState, create_app

__all__ = ["EngineState", "create_app"]
