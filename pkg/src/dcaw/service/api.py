"""HTTP API binding the workbench together.

Resource-oriented JSON endpoints; every module error surfaces as an
ApiError body {code, message, detail} with a stable code. The OpenAPI
description at /openapi.json is the machine-readable interface contract
the UI consumes.
"""

from __future__ import annotations

import uuid
from datetime import datetime, timezone
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from dcaw import analytics
from dcaw.errors import (
    ConflictError,
    DcawError,
    EvidenceInconsistentError,
    InvalidRecordError,
    NotFoundError,
    UnknownIdError,
)
from dcaw.learn.em import LearnConfig
from dcaw.learn.records import RecordSet
from dcaw.schema.compile import compile_model
from dcaw.schema.diagnose import diagnose
from dcaw.schema.model import CitationRecord, parse_model
from dcaw.schema.records import records_to_assignments
from dcaw.service.jobs import JobRunner
from dcaw.service.store import Store
from dcaw.session import report as report_mod
from dcaw.session import state as session_ops
from dcaw.session.state import Step
from dcaw.session.versions import (
    ModelVersion,
    contribute_and_retrain,
    train_version,
)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _new_id(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


def _status_for(exc: DcawError) -> int:
    if isinstance(exc, (NotFoundError, UnknownIdError)):
        return 404
    if isinstance(exc, ConflictError):
        return 409
    if isinstance(exc, EvidenceInconsistentError):
        return 422
    return 400


class LearnConfigBody(BaseModel):
    max_iterations: int = 200
    tolerance: float = 1e-6
    pseudo_count: float = 1.0
    seed: int = 0

    def to_config(self) -> LearnConfig:
        return LearnConfig(
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            pseudo_count=self.pseudo_count,
            seed=self.seed,
        )


class CitationBody(BaseModel):
    problem_id: str
    cited_causes: list[str] = Field(default_factory=list)
    cited_effects: list[str] = Field(default_factory=list)
    source: str = "within-company"


class TrainBody(BaseModel):
    citations: list[CitationBody] | None = None
    record_set_id: str | None = None
    config: LearnConfigBody = Field(default_factory=LearnConfigBody)
    restarts: int = 1


class DiagnoseBody(BaseModel):
    version_id: str
    problem_id: str
    evidence: dict[str, str] = Field(default_factory=dict)


class SessionCreateBody(BaseModel):
    model_version_id: str


class AdvanceBody(BaseModel):
    to_step: str
    revision: int


class SampleBody(BaseModel):
    defect_ids: list[str]
    revision: int


class SystematicErrorBody(BaseModel):
    label: str
    defect_category: str
    member_defect_ids: list[str]
    iteration_id: str
    revision: int


class QueryBody(BaseModel):
    problem_id: str
    evidence: dict[str, str] = Field(default_factory=dict)
    revision: int


class CauseBody(BaseModel):
    systematic_error_id: str
    problem_id: str
    category_id: str
    cause_id: str | None = None
    cause_text: str | None = None
    rationale: str = ""
    revision: int


class ActionBody(BaseModel):
    description: str
    linked_cause_ids: list[str]
    owner: str = ""
    revision: int


class ActionStatusBody(BaseModel):
    status: str
    revision: int


class DefectBody(BaseModel):
    id: str
    iteration_id: str
    unit_id: str
    nature: str
    detail_tag: str | None = None
    description: str = ""


class DefectUploadBody(BaseModel):
    defects: list[DefectBody] | None = None
    csv: str | None = None


class TagBody(BaseModel):
    detail_tag: str | None


class UnitBody(BaseModel):
    unit_id: str
    size_fp: float


class IterationBody(BaseModel):
    iteration_id: str
    units: list[UnitBody]
    inspection_effort_hours: float


class RetrainBody(BaseModel):
    version_id: str
    session_ids: list[str]
    config: LearnConfigBody = Field(default_factory=LearnConfigBody)
    restarts: int = 5
    on_free_text: str = "error"


def _version_summary(v: ModelVersion) -> dict:
    return {
        "id": v.id,
        "parent_id": v.parent_id,
        "created_at": v.created_at,
        "model_version": v.model.version,
        "trained": bool(v.learn_meta.get("trained", True)),
        "record_fingerprint": v.record_fingerprint,
        "record_set_id": v.record_set_id,
    }


def _session_view(session) -> dict:
    return session_ops.session_to_document(session)


def create_app(store: Store, jobs: JobRunner | None = None) -> FastAPI:
    app = FastAPI(
        title="dcaw service",
        description="Defect causal analysis workbench API",
        version="1",
    )
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    runner = jobs or JobRunner()

    @app.exception_handler(DcawError)
    async def handle_dcaw_error(request: Request, exc: DcawError) -> JSONResponse:
        return JSONResponse(
            status_code=_status_for(exc),
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    # --- models and versions -------------------------------------------

    @app.post("/models/validate")
    def validate_model_doc(document: dict) -> dict:
        try:
            model = parse_model(document)
            compiled = compile_model(model)
        except DcawError as exc:
            return {"valid": False,
                    "error": {"code": exc.code, "message": exc.message},
                    "warnings": []}
        return {"valid": True, "error": None, "warnings": list(compiled.warnings)}

    @app.post("/models", status_code=201)
    def upload_model(document: dict) -> dict:
        model = parse_model(document)
        compiled = compile_model(model)
        version = ModelVersion(
            id=_new_id("v"),
            parent_id=None,
            model=model,
            network=compiled.network,
            record_set_id=None,
            record_fingerprint=RecordSet(()).fingerprint(),
            learn_meta={"trained": False},
            created_at=_now(),
        )
        store.put_version(version)
        return {"version_id": version.id, "warnings": list(compiled.warnings)}

    @app.get("/versions")
    def list_versions() -> list[dict]:
        return [_version_summary(v) for v in store.list_versions()]

    @app.get("/versions/{version_id}")
    def get_version(
        version_id: str, include_network: bool = False, include_model: bool = False
    ) -> dict:
        version = store.get_version(version_id)
        out = _version_summary(version)
        out["learn_meta"] = version.learn_meta
        if include_network:
            from dcaw.bn.network import network_to_document

            out["network"] = network_to_document(version.network)
        if include_model:
            from dcaw.schema.model import model_to_document

            out["model"] = model_to_document(version.model)
        return out

    @app.post("/versions/{version_id}/train", status_code=202)
    def train(version_id: str, body: TrainBody) -> dict:
        parent = store.get_version(version_id)
        if body.citations is not None:
            citations = [
                CitationRecord(
                    c.problem_id, frozenset(c.cited_causes),
                    frozenset(c.cited_effects), c.source,
                )
                for c in body.citations
            ]
            compiled = parent.compiled
            records = records_to_assignments(parent.model, compiled, citations)
            record_set_id = _new_id("rs")
            store.put_record_set(record_set_id, records)
        elif body.record_set_id is not None:
            record_set_id = body.record_set_id
            records = store.get_record_set(record_set_id)
        else:
            raise InvalidRecordError("training needs citations or a record_set_id")
        config = body.config.to_config()
        restarts = body.restarts

        def run() -> dict:
            network, meta = train_version(parent.model, records, config, restarts)
            meta["trained"] = True
            child = ModelVersion(
                id=_new_id("v"),
                parent_id=parent.id,
                model=parent.model,
                network=network,
                record_set_id=record_set_id,
                record_fingerprint=records.fingerprint(),
                learn_meta=meta,
                created_at=_now(),
            )
            store.put_version(child)
            return {"version_id": child.id, "loglik_trace": meta["loglik_trace"]}

        job = runner.submit("train", run)
        return {"job_id": job.id, "status": job.status}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str) -> dict:
        job = runner.get(job_id)
        out: dict[str, Any] = {"id": job.id, "kind": job.kind, "status": job.status}
        if job.status == "done":
            out["result"] = job.result
        elif job.status == "failed":
            out["error"] = {"code": job.error_code, "message": job.error}
        return out

    # --- diagnosis -------------------------------------------------------

    @app.post("/diagnose")
    def diagnose_route(body: DiagnoseBody) -> dict:
        version = store.get_version(body.version_id)
        view = diagnose(version.compiled, version.network, body.problem_id, body.evidence)
        return view.as_dict()

    # --- sessions ---------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreateBody) -> dict:
        store.get_version(body.model_version_id)
        session = session_ops.create_session(
            _new_id("s"), body.model_version_id, _now()
        )
        store.create_session(session)
        return _session_view(session)

    @app.get("/sessions")
    def list_sessions() -> list[dict]:
        return [_session_view(s) for s in store.list_sessions()]

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _session_view(store.get_session(session_id))

    def _mutate(session_id: str, revision: int, fn) -> dict:
        session = store.get_session(session_id)
        if session.revision != revision:
            raise ConflictError(
                f"session {session_id!r} is at revision {session.revision}, "
                f"request was based on {revision}"
            )
        updated = fn(session)
        store.update_session(updated, expected_revision=revision)
        return _session_view(updated)

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, body: AdvanceBody) -> dict:
        return _mutate(
            session_id, body.revision,
            lambda s: session_ops.advance(s, Step(body.to_step)),
        )

    @app.post("/sessions/{session_id}/sample")
    def set_sample(session_id: str, body: SampleBody) -> dict:
        for defect_id in body.defect_ids:
            store.get_defect(defect_id)
        return _mutate(
            session_id, body.revision,
            lambda s: session_ops.set_sample(s, body.defect_ids),
        )

    @app.post("/sessions/{session_id}/systematic-errors")
    def add_systematic_error(session_id: str, body: SystematicErrorBody) -> dict:
        defects = store.list_defects()

        def fn(session):
            error = analytics.group_defects(
                defects,
                error_id=f"se-{len(session.systematic_errors) + 1}",
                label=body.label,
                defect_category=body.defect_category,
                member_defect_ids=body.member_defect_ids,
                iteration_id=body.iteration_id,
            )
            return session_ops.attach_systematic_error(session, error)

        return _mutate(session_id, body.revision, fn)

    @app.post("/sessions/{session_id}/queries")
    def run_query(session_id: str, body: QueryBody) -> dict:
        session = store.get_session(session_id)
        if session.revision != body.revision:
            raise ConflictError(
                f"session {session_id!r} is at revision {session.revision}, "
                f"request was based on {body.revision}"
            )
        version = store.get_version(session.model_version_id)
        updated, query = session_ops.run_diagnosis(
            session, version.compiled, version.network,
            body.problem_id, body.evidence, _now(),
        )
        store.update_session(updated, expected_revision=body.revision)
        return {
            "session": _session_view(updated),
            "query": {
                "problem_id": query.problem_id,
                "evidence": [list(p) for p in query.evidence],
                "result": query.result,
                "timestamp": query.timestamp,
            },
        }

    @app.post("/sessions/{session_id}/causes")
    def add_cause(session_id: str, body: CauseBody) -> dict:
        session = store.get_session(session_id)
        version = store.get_version(session.model_version_id)
        return _mutate(
            session_id, body.revision,
            lambda s: session_ops.record_cause(
                s, version.compiled,
                systematic_error_id=body.systematic_error_id,
                problem_id=body.problem_id,
                category_id=body.category_id,
                cause_id=body.cause_id,
                cause_text=body.cause_text,
                rationale=body.rationale,
            ),
        )

    @app.post("/sessions/{session_id}/actions")
    def add_action(session_id: str, body: ActionBody) -> dict:
        return _mutate(
            session_id, body.revision,
            lambda s: session_ops.propose_action(
                s, body.description, body.linked_cause_ids, body.owner
            ),
        )

    @app.post("/sessions/{session_id}/actions/{action_id}/status")
    def action_status(session_id: str, action_id: str, body: ActionStatusBody) -> dict:
        return _mutate(
            session_id, body.revision,
            lambda s: session_ops.set_action_status(s, action_id, body.status),
        )

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str, format: str = Query("json")):
        session = store.get_session(session_id)
        ctx = report_mod.ReportContext(
            defects_by_id={d.id: d for d in store.list_defects()},
            stats_by_iteration={s.iteration_id: s for s in store.list_iteration_stats()},
        )
        report = report_mod.generate_report(session, ctx)
        if format == "text":
            return PlainTextResponse(report_mod.render_report_text(report))
        return JSONResponse(report)

    # --- retraining -------------------------------------------------------

    @app.post("/retrain", status_code=202)
    def retrain(body: RetrainBody) -> dict:
        parent = store.get_version(body.version_id)
        sessions = [store.get_session(sid) for sid in body.session_ids]
        if parent.record_set_id is not None:
            parent_records = store.get_record_set(parent.record_set_id)
        else:
            parent_records = RecordSet(())
        config = body.config.to_config()

        def run() -> dict:
            record_set_id = _new_id("rs")
            child, records = contribute_and_retrain(
                parent, parent_records, sessions, config,
                restarts=body.restarts, on_free_text=body.on_free_text,
                new_version_id=_new_id("v"),
                new_record_set_id=record_set_id,
                created_at=_now(),
            )
            store.put_record_set(record_set_id, records)
            store.put_version(child)
            return {
                "version_id": child.id,
                "record_count": len(records),
                "loglik_trace": child.learn_meta["loglik_trace"],
            }

        job = runner.submit("retrain", run)
        return {"job_id": job.id, "status": job.status}

    # --- defects and analytics ---------------------------------------------

    @app.post("/defects", status_code=201)
    def upload_defects(body: DefectUploadBody) -> dict:
        from dcaw.analytics.defects import DefectRecord, read_defects_csv

        if body.csv is not None:
            defects = read_defects_csv(body.csv)
        elif body.defects is not None:
            defects = [
                DefectRecord(
                    id=d.id, iteration_id=d.iteration_id, unit_id=d.unit_id,
                    nature=d.nature, detail_tag=d.detail_tag, description=d.description,
                )
                for d in body.defects
            ]
        else:
            raise InvalidRecordError("upload needs defects or csv")
        count = store.add_defects(defects)
        return {"added": count}

    @app.get("/defects")
    def list_defects(iteration: str | None = None) -> list[dict]:
        return [Store._defect_doc(d) for d in store.list_defects(iteration)]

    @app.post("/defects/{defect_id}/tag")
    def tag_defect(defect_id: str, body: TagBody) -> dict:
        return Store._defect_doc(store.tag_defect(defect_id, body.detail_tag))

    @app.post("/iterations", status_code=201)
    def put_iteration(body: IterationBody) -> dict:
        from dcaw.analytics.defects import IterationStats, UnitSize

        stats = IterationStats(
            iteration_id=body.iteration_id,
            units=tuple(UnitSize(u.unit_id, u.size_fp) for u in body.units),
            inspection_effort_hours=body.inspection_effort_hours,
        )
        store.put_iteration_stats(stats)
        return {"iteration_id": stats.iteration_id, "units": len(stats.units)}

    @app.get("/iterations")
    def list_iterations() -> list[dict]:
        return [
            {
                "iteration_id": s.iteration_id,
                "total_size_fp": s.total_size,
                "inspection_effort_hours": s.inspection_effort_hours,
                "units": [{"unit_id": u.unit_id, "size_fp": u.size_fp} for u in s.units],
            }
            for s in store.list_iteration_stats()
        ]

    @app.get("/analytics/pareto")
    def analytics_pareto(iteration: str) -> dict:
        defects = store.list_defects(iteration)
        return analytics.pareto(defects).as_dict()

    @app.get("/analytics/uchart")
    def analytics_uchart(iteration: str | None = None, by: str = "fp") -> dict:
        if by == "fp":
            if iteration is None:
                raise InvalidRecordError("uchart by=fp needs an iteration")
            stats = store.get_iteration_stats(iteration)
            return analytics.u_chart(stats, store.list_defects(iteration)).as_dict()
        if by == "hour":
            all_stats = store.list_iteration_stats()
            return analytics.u_chart_across_iterations(
                all_stats, store.list_defects()
            ).as_dict()
        raise InvalidRecordError("uchart 'by' must be fp or hour")

    @app.get("/analytics/density")
    def analytics_density(iteration: str) -> dict:
        stats = store.get_iteration_stats(iteration)
        defects = store.list_defects(iteration)
        return {
            "iteration_id": iteration,
            "defects": len(defects),
            "size_fp": stats.total_size,
            "density": analytics.defect_density(stats, defects),
        }

    @app.get("/analytics/efficiency")
    def analytics_efficiency(iteration: str) -> dict:
        stats = store.get_iteration_stats(iteration)
        defects = store.list_defects(iteration)
        return {
            "iteration_id": iteration,
            "defects": len(defects),
            "hours": stats.inspection_effort_hours,
            "efficiency": analytics.inspection_efficiency(stats, defects),
        }

    return app
