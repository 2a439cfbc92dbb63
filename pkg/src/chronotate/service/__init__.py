"""HTTP service over the annotation pipeline."""

from .app import ApiError, create_app
from .store import ProjectExists, ProjectNotFound, ProjectStore

__all__ = ["ApiError", "ProjectExists", "ProjectNotFound", "ProjectStore", "create_app"]
