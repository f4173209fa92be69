"""File-backed document store with atomic writes.

Every write lands in a temp file in the target directory and is moved
into place with os.replace, so a crash between write and rename leaves
either the old or the new state, never a torn file. Stray temp files are
swept on open. A store-wide lock serializes read-modify-write cycles;
session updates use an optimistic revision counter on top.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Iterable

from dcaw.analytics.defects import DefectRecord, IterationStats, UnitSize
from dcaw.errors import ConflictError, NotFoundError, StoreSchemaError
from dcaw.learn.records import RecordSet
from dcaw.session.state import Session, session_from_document, session_to_document
from dcaw.session.versions import (
    ModelVersion,
    version_from_document,
    version_to_document,
)

SCHEMA_VERSION = 1

_TMP_PREFIX = ".tmp-"

# Indirection point for crash-injection tests.
_replace = os.replace


def _write_atomic(path: Path, payload: dict) -> None:
    data = json.dumps(payload, indent=2)
    fd, tmp_name = tempfile.mkstemp(prefix=_TMP_PREFIX, dir=path.parent)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        _replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _read(path: Path) -> dict:
    with open(path) as handle:
        return json.load(handle)


class Store:
    """Collections: model versions, record sets, sessions, defects,
    iteration stats."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.RLock()
        self.path.mkdir(parents=True, exist_ok=True)
        for sub in ("model_versions", "record_sets", "sessions"):
            (self.path / sub).mkdir(exist_ok=True)
        self._sweep_temp_files()
        meta_path = self.path / "meta.json"
        if meta_path.exists():
            meta = _read(meta_path)
            if meta.get("schema_version") != SCHEMA_VERSION:
                raise StoreSchemaError(
                    f"store at {self.path} has schema version "
                    f"{meta.get('schema_version')!r}, expected {SCHEMA_VERSION}"
                )
        else:
            _write_atomic(meta_path, {"schema_version": SCHEMA_VERSION})

    def _sweep_temp_files(self) -> None:
        for tmp in self.path.rglob(f"{_TMP_PREFIX}*"):
            tmp.unlink(missing_ok=True)

    # --- model versions -------------------------------------------------

    def put_version(self, version: ModelVersion) -> None:
        with self._lock:
            path = self.path / "model_versions" / f"{version.id}.json"
            if path.exists():
                raise ConflictError(f"model version {version.id!r} already exists")
            if version.parent_id is not None:
                self.get_version(version.parent_id)
            _write_atomic(path, version_to_document(version))

    def get_version(self, version_id: str) -> ModelVersion:
        path = self.path / "model_versions" / f"{version_id}.json"
        if not path.exists():
            raise NotFoundError(f"unknown model version {version_id!r}")
        return version_from_document(_read(path))

    def list_versions(self) -> list[ModelVersion]:
        versions = [
            version_from_document(_read(p))
            for p in sorted((self.path / "model_versions").glob("*.json"))
        ]
        return sorted(versions, key=lambda v: (v.created_at, v.id))

    # --- record sets ------------------------------------------------------

    def put_record_set(self, record_set_id: str, records: RecordSet) -> None:
        with self._lock:
            path = self.path / "record_sets" / f"{record_set_id}.json"
            if path.exists():
                raise ConflictError(f"record set {record_set_id!r} already exists")
            _write_atomic(path, {
                "records": [dict(r) for r in records.records],
                "provenance": list(records.provenance),
            })

    def get_record_set(self, record_set_id: str) -> RecordSet:
        path = self.path / "record_sets" / f"{record_set_id}.json"
        if not path.exists():
            raise NotFoundError(f"unknown record set {record_set_id!r}")
        doc = _read(path)
        return RecordSet(tuple(doc["records"]), tuple(doc["provenance"]))

    # --- sessions ---------------------------------------------------------

    def create_session(self, session: Session) -> None:
        with self._lock:
            path = self.path / "sessions" / f"{session.id}.json"
            if path.exists():
                raise ConflictError(f"session {session.id!r} already exists")
            _write_atomic(path, session_to_document(session))

    def get_session(self, session_id: str) -> Session:
        path = self.path / "sessions" / f"{session_id}.json"
        if not path.exists():
            raise NotFoundError(f"unknown session {session_id!r}")
        return session_from_document(_read(path))

    def list_sessions(self) -> list[Session]:
        return sorted(
            (session_from_document(_read(p))
             for p in (self.path / "sessions").glob("*.json")),
            key=lambda s: (s.created_at, s.id),
        )

    def update_session(self, session: Session, expected_revision: int) -> None:
        """Compare-and-swap on the revision counter; single writer wins."""
        with self._lock:
            current = self.get_session(session.id)
            if current.revision != expected_revision:
                raise ConflictError(
                    f"session {session.id!r} is at revision {current.revision}, "
                    f"expected {expected_revision}"
                )
            path = self.path / "sessions" / f"{session.id}.json"
            _write_atomic(path, session_to_document(session))

    # --- defects ----------------------------------------------------------

    def _defects_path(self) -> Path:
        return self.path / "defects.json"

    def add_defects(self, defects: Iterable[DefectRecord]) -> int:
        new = list(defects)
        with self._lock:
            existing = {d.id: d for d in self.list_defects()}
            for defect in new:
                if defect.id in existing:
                    raise ConflictError(f"defect {defect.id!r} already exists")
                existing[defect.id] = defect
            _write_atomic(self._defects_path(), {
                "defects": [self._defect_doc(d) for d in existing.values()],
            })
        return len(new)

    @staticmethod
    def _defect_doc(d: DefectRecord) -> dict:
        return {
            "id": d.id, "iteration_id": d.iteration_id, "unit_id": d.unit_id,
            "nature": d.nature, "description": d.description,
            "detail_tag": d.detail_tag, "systematic_error_id": d.systematic_error_id,
        }

    def list_defects(self, iteration_id: str | None = None) -> list[DefectRecord]:
        path = self._defects_path()
        if not path.exists():
            return []
        defects = [DefectRecord(**doc) for doc in _read(path)["defects"]]
        if iteration_id is not None:
            defects = [d for d in defects if d.iteration_id == iteration_id]
        return defects

    def get_defect(self, defect_id: str) -> DefectRecord:
        for defect in self.list_defects():
            if defect.id == defect_id:
                return defect
        raise NotFoundError(f"unknown defect {defect_id!r}")

    def tag_defect(self, defect_id: str, detail_tag: str | None) -> DefectRecord:
        from dataclasses import replace as _dc_replace

        with self._lock:
            defects = self.list_defects()
            if defect_id not in {d.id for d in defects}:
                raise NotFoundError(f"unknown defect {defect_id!r}")
            updated = [
                _dc_replace(d, detail_tag=detail_tag) if d.id == defect_id else d
                for d in defects
            ]
            _write_atomic(self._defects_path(), {
                "defects": [self._defect_doc(d) for d in updated],
            })
            return next(d for d in updated if d.id == defect_id)

    # --- iteration stats ----------------------------------------------------

    def _iterations_path(self) -> Path:
        return self.path / "iterations.json"

    def put_iteration_stats(self, stats: IterationStats) -> None:
        with self._lock:
            existing = {s.iteration_id: s for s in self.list_iteration_stats()}
            existing[stats.iteration_id] = stats
            _write_atomic(self._iterations_path(), {
                "iterations": [
                    {
                        "iteration_id": s.iteration_id,
                        "units": [
                            {"unit_id": u.unit_id, "size_fp": u.size_fp}
                            for u in s.units
                        ],
                        "inspection_effort_hours": s.inspection_effort_hours,
                    }
                    for s in existing.values()
                ],
            })

    def list_iteration_stats(self) -> list[IterationStats]:
        path = self._iterations_path()
        if not path.exists():
            return []
        return [
            IterationStats(
                iteration_id=doc["iteration_id"],
                units=tuple(UnitSize(u["unit_id"], u["size_fp"]) for u in doc["units"]),
                inspection_effort_hours=doc["inspection_effort_hours"],
            )
            for doc in _read(path)["iterations"]
        ]

    def get_iteration_stats(self, iteration_id: str) -> IterationStats:
        for stats in self.list_iteration_stats():
            if stats.iteration_id == iteration_id:
                return stats
        raise NotFoundError(f"no iteration stats for {iteration_id!r}")
