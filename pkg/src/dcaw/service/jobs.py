"""Background jobs with polling. Training can take seconds; a blocking
endpoint would stall the UI, so training runs in a worker thread and
clients poll the job id."""

from __future__ import annotations

import threading
import traceback
import uuid
from dataclasses import dataclass
from typing import Callable

from dcaw.errors import NotFoundError


@dataclass
class Job:
    id: str
    kind: str
    status: str = "running"  # running | done | failed
    result: dict | None = None
    error: str | None = None
    error_code: str | None = None


class JobRunner:
    """Thread-per-job runner; ``synchronous=True`` runs inline for tests
    and for the CLI."""

    def __init__(self, synchronous: bool = False):
        self.synchronous = synchronous
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, kind: str, fn: Callable[[], dict]) -> Job:
        job = Job(id=f"job-{uuid.uuid4().hex[:12]}", kind=kind)
        with self._lock:
            self._jobs[job.id] = job

        def run() -> None:
            try:
                result = fn()
                with self._lock:
                    job.result = result
                    job.status = "done"
            except Exception as exc:
                with self._lock:
                    job.error = str(exc)
                    job.error_code = getattr(exc, "code", "error")
                    job.status = "failed"
                    job.result = {"traceback": traceback.format_exc()}

        if self.synchronous:
            run()
        else:
            thread = threading.Thread(target=run, name=f"dcaw-{kind}", daemon=True)
            thread.start()
        return job

    def get(self, job_id: str) -> Job:
        with self._lock:
            if job_id not in self._jobs:
                raise NotFoundError(f"unknown job {job_id!r}")
            return self._jobs[job_id]
