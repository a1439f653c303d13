"""Model gateway sidecar: /embed, /summarize and /health over HTTP."""

from .app import Settings, create_app

__version__ = "0.1.0"
