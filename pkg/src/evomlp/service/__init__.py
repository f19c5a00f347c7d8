"""HTTP service wrapping the core training and export APIs."""

from .app import app, create_app

__all__ = ["app", "create_app"]
