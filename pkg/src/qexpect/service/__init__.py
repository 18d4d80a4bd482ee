"""HTTP service wrapping the experiment runner."""

from .app import app, create_app, execute_request
from .models import ExperimentRequest, VqeRequest

__all__ = ["app", "create_app", "execute_request", "ExperimentRequest", "VqeRequest"]
