"""HTTP layer: four FastAPI apps plus the wiring and process runner."""

from .broker_api import build_broker_app
from .catalog_api import build_catalog_app
from .registry_api import build_registry_app
from .retriever_api import build_retriever_app
from .runner import Suite, build_suite, serve

__all__ = [
    "build_broker_app",
    "build_catalog_app",
    "build_registry_app",
    "build_retriever_app",
    "Suite",
    "build_suite",
    "serve",
]
