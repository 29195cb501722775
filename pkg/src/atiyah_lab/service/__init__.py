"""HTTP surface over the toolkit: a FastAPI app plus its request/response
schemas. The CLI talks to this app in process by default; ``create_app`` is
also the entry point for running it as a standalone server.
"""

from .app import app, create_app

__all__ = ["app", "create_app"]
