"""Reference inference server for the multi-hop QA wire protocol."""

from .app import create_app
from .backends import Backend, EchoBackend, UnloadedBackend, resolve_backend
from .protocol import (
    N_TYPES,
    TASKS,
    TYPE_ORDER,
    MalformedRequest,
    ModelNotLoaded,
    fused_scores,
    ranked_relations,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "EchoBackend",
    "MalformedRequest",
    "ModelNotLoaded",
    "N_TYPES",
    "TASKS",
    "TYPE_ORDER",
    "UnloadedBackend",
    "create_app",
    "fused_scores",
    "ranked_relations",
    "resolve_backend",
    "__version__",
]
