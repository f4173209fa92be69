"""Model versions and the continuous-learning retrain cycle.

Versions are immutable and form a tree via parent pointers. Retraining
converts each completed session's (problem, determined causes) pairs into
within-company citation records, appends them to the parent's training
set, and relearns from scratch with multiple random restarts, keeping the
run with the highest final objective (ties go to the lowest seed).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, Sequence

from dcaw.bn.network import Network, network_from_document, network_to_document
from dcaw.errors import LearnFailureError, UnmappedFreeTextCauseError, WrongStepError
from dcaw.learn.em import LearnConfig, LearnResult, em_learn, initialize_parameters
from dcaw.learn.records import RecordSet
from dcaw.schema.compile import CompiledModel, compile_model
from dcaw.schema.model import (
    CauseEffectModel,
    CitationRecord,
    model_from_document,
    model_to_document,
)
from dcaw.schema.records import records_to_assignments
from dcaw.session.state import Session, Step


@dataclass(frozen=True)
class ModelVersion:
    id: str
    parent_id: str | None
    model: CauseEffectModel
    network: Network
    record_set_id: str | None
    record_fingerprint: str
    learn_meta: dict
    created_at: str

    @cached_property
    def compiled(self) -> CompiledModel:
        return compile_model(self.model)


def sessions_to_citations(
    sessions: Sequence[Session], on_free_text: str = "error"
) -> tuple[list[CitationRecord], list[str]]:
    """One citation per (session, problem) pair of determined model causes.

    Free-text causes cannot enter the network vocabulary; ``on_free_text``
    is either "error" (reject the contribution until the model is
    extended) or "skip" (contribute the mappable causes and report the
    skipped ones).
    """
    if on_free_text not in ("error", "skip"):
        raise ValueError("on_free_text must be 'error' or 'skip'")
    skipped: list[str] = []
    citations: list[CitationRecord] = []
    for session in sessions:
        if session.step != Step.DOCUMENT:
            raise WrongStepError(
                f"session {session.id!r} has not reached the document step"
            )
        free_text = [c for c in session.determined_causes if c.is_free_text]
        if free_text and on_free_text == "error":
            names = [c.cause_text for c in free_text]
            raise UnmappedFreeTextCauseError(
                f"session {session.id!r} has free-text causes not in the model: {names}; "
                "promote them into the model schema or retrain with on_free_text='skip'"
            )
        skipped += [f"{session.id}:{c.id}" for c in free_text]
        by_problem: dict[str, set[str]] = {}
        for cause in session.determined_causes:
            if cause.is_free_text:
                continue
            by_problem.setdefault(cause.problem_id, set()).add(cause.cause_id)
        for problem_id in sorted(by_problem):
            citations.append(CitationRecord(
                problem_id=problem_id,
                cited_causes=frozenset(by_problem[problem_id]),
                cited_effects=frozenset(),
                source="within-company",
            ))
    return citations, skipped


def train_version(
    model: CauseEffectModel,
    records: RecordSet,
    config: LearnConfig,
    restarts: int = 1,
) -> tuple[Network, dict]:
    """Multi-restart EM on a freshly compiled structure; best final objective wins."""
    if restarts < 1:
        raise LearnFailureError("restarts must be at least 1")
    compiled = compile_model(model)
    config = replace(config, frozen_variables=compiled.frozen_variables)
    best: LearnResult | None = None
    best_seed = None
    tried = []
    for k in range(restarts):
        seed = config.seed + k
        start = initialize_parameters(
            compiled.network, seed=seed, frozen=compiled.frozen_variables
        )
        try:
            result = em_learn(start, records, config)
        except Exception as exc:
            raise LearnFailureError(f"EM failed for seed {seed}: {exc}") from exc
        tried.append({"seed": seed, "loglik": result.loglik_trace[-1],
                      "iterations": result.iterations, "converged": result.converged})
        if best is None or result.loglik_trace[-1] > best.loglik_trace[-1]:
            best, best_seed = result, seed
    meta = {
        "config": {
            "max_iterations": config.max_iterations,
            "tolerance": config.tolerance,
            "pseudo_count": config.pseudo_count,
            "seed": config.seed,
        },
        "restarts": restarts,
        "tried": tried,
        "chosen_seed": best_seed,
        "loglik": best.loglik_trace[-1],
        "loglik_trace": list(best.loglik_trace),
        "iterations": best.iterations,
        "converged": best.converged,
        "record_count": len(records),
    }
    return best.network, meta


def contribute_and_retrain(
    parent: ModelVersion,
    parent_records: RecordSet,
    sessions: Sequence[Session],
    config: LearnConfig,
    restarts: int = 5,
    on_free_text: str = "error",
    *,
    new_version_id: str,
    new_record_set_id: str | None = None,
    created_at: str = "",
) -> tuple[ModelVersion, RecordSet]:
    """Append within-company records from sessions and train a child version.

    The parent version is untouched; the result records its lineage and
    learning metadata.
    """
    citations, skipped = sessions_to_citations(sessions, on_free_text)
    compiled = parent.compiled
    extra = records_to_assignments(parent.model, compiled, citations)
    records = parent_records.extend(extra)
    network, meta = train_version(parent.model, records, config, restarts)
    meta["contributed_records"] = len(extra)
    meta["skipped_free_text_causes"] = skipped
    child = ModelVersion(
        id=new_version_id,
        parent_id=parent.id,
        model=parent.model,
        network=network,
        record_set_id=new_record_set_id,
        record_fingerprint=records.fingerprint(),
        learn_meta=meta,
        created_at=created_at,
    )
    return child, records


# --- serialization -----------------------------------------------------

def version_to_document(version: ModelVersion) -> dict:
    return {
        "format": "dcaw-model-version",
        "version": 1,
        "id": version.id,
        "parent_id": version.parent_id,
        "model": model_to_document(version.model),
        "network": network_to_document(version.network),
        "record_set_id": version.record_set_id,
        "record_fingerprint": version.record_fingerprint,
        "learn_meta": version.learn_meta,
        "created_at": version.created_at,
    }


def version_from_document(doc: Mapping) -> ModelVersion:
    return ModelVersion(
        id=doc["id"],
        parent_id=doc["parent_id"],
        model=model_from_document(doc["model"]),
        network=network_from_document(doc["network"]),
        record_set_id=doc["record_set_id"],
        record_fingerprint=doc["record_fingerprint"],
        learn_meta=dict(doc["learn_meta"]),
        created_at=doc["created_at"],
    )
