"""Live-session HTTP/WebSocket service around the simulated glove."""

from .app import create_app

__all__ = ["create_app"]
