"""HTTP service exposing plan construction, simulation, verification and
Bloch trajectory export over JSON."""

from .app import app, create_app

__all__ = ["app", "create_app"]
