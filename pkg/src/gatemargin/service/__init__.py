"""HTTP face of the toolkit: pydantic wire models and the FastAPI app."""

from gatemargin.service.app import create_app

__all__ = ["create_app"]
