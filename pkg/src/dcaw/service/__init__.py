"""Operational layer: file-backed store, training jobs, HTTP API."""

from dcaw.service.store import Store
from dcaw.service.jobs import JobRunner

__all__ = ["JobRunner", "Store"]
