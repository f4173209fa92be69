"""Session state machine over the six analysis steps.

Steps must be entered in order (revisiting earlier steps is allowed,
skipping forward is not) and forward transitions are gated: classifying
needs a sample, determining causes needs a systematic error, developing
actions needs a determined cause. Sessions are immutable; every operation
returns a new session with the revision counter bumped, which the store
uses for optimistic concurrency.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Sequence

from dcaw.analytics.defects import SystematicError
from dcaw.bn.network import Network
from dcaw.errors import (
    BadReferenceError,
    GateUnsatisfiedError,
    IllegalStatusTransitionError,
    StepSkipError,
    WrongStepError,
)
from dcaw.schema.compile import CompiledModel
from dcaw.schema.diagnose import DiagnosisView, diagnose


class Step(str, Enum):
    SELECT_SAMPLE = "select_sample"
    CLASSIFY = "classify"
    IDENTIFY_SYSTEMATIC_ERRORS = "identify_systematic_errors"
    DETERMINE_CAUSES = "determine_causes"
    DEVELOP_ACTIONS = "develop_actions"
    DOCUMENT = "document"


STEP_ORDER = tuple(Step)

ACTION_STATUSES = ("proposed", "in_progress", "done")


@dataclass(frozen=True)
class DiagnosticQuery:
    problem_id: str
    evidence: tuple[tuple[str, str], ...]
    result: dict
    timestamp: str

    def evidence_dict(self) -> dict[str, str]:
        return dict(self.evidence)


@dataclass(frozen=True)
class DeterminedCause:
    id: str
    systematic_error_id: str
    problem_id: str
    category_id: str
    cause_id: str | None = None
    cause_text: str | None = None
    rationale: str = ""

    @property
    def is_free_text(self) -> bool:
        return self.cause_id is None


@dataclass(frozen=True)
class ActionProposal:
    id: str
    linked_cause_ids: tuple[str, ...]
    description: str
    owner: str = ""
    status: str = "proposed"


@dataclass(frozen=True)
class Session:
    id: str
    created_at: str
    model_version_id: str
    step: Step = Step.SELECT_SAMPLE
    sample: tuple[str, ...] = ()
    systematic_errors: tuple[SystematicError, ...] = ()
    queries: tuple[DiagnosticQuery, ...] = ()
    determined_causes: tuple[DeterminedCause, ...] = ()
    actions: tuple[ActionProposal, ...] = ()
    revision: int = 0

    def systematic_error_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.systematic_errors)

    def _bump(self, **changes) -> "Session":
        return replace(self, revision=self.revision + 1, **changes)


def create_session(session_id: str, model_version_id: str, created_at: str) -> Session:
    return Session(id=session_id, created_at=created_at, model_version_id=model_version_id)


def _require_step(session: Session, step: Step, what: str) -> None:
    if session.step != step:
        raise WrongStepError(
            f"{what} requires step {step.value!r}, session is in {session.step.value!r}"
        )


def _check_gate(session: Session, to_step: Step) -> None:
    if to_step == Step.CLASSIFY and not session.sample:
        raise GateUnsatisfiedError("classify requires a nonempty defect sample")
    if to_step == Step.DETERMINE_CAUSES and not session.systematic_errors:
        raise GateUnsatisfiedError(
            "determine_causes requires at least one systematic error"
        )
    if to_step == Step.DEVELOP_ACTIONS and not session.determined_causes:
        raise GateUnsatisfiedError(
            "develop_actions requires at least one determined cause"
        )


def advance(session: Session, to_step: Step) -> Session:
    """Move to the next step (gated) or back to any earlier step."""
    to_step = Step(to_step)
    current = STEP_ORDER.index(session.step)
    target = STEP_ORDER.index(to_step)
    if target > current + 1:
        raise StepSkipError(
            f"cannot skip from {session.step.value!r} to {to_step.value!r}"
        )
    if target == current + 1:
        _check_gate(session, to_step)
    return session._bump(step=to_step)


def set_sample(session: Session, defect_ids: Sequence[str]) -> Session:
    _require_step(session, Step.SELECT_SAMPLE, "selecting the sample")
    ids = tuple(defect_ids)
    if len(set(ids)) != len(ids):
        raise BadReferenceError("sample contains duplicate defect ids")
    return session._bump(sample=ids)


def attach_systematic_error(session: Session, error: SystematicError) -> Session:
    _require_step(session, Step.IDENTIFY_SYSTEMATIC_ERRORS, "identifying systematic errors")
    if error.id in session.systematic_error_ids():
        raise BadReferenceError(f"systematic error {error.id!r} already attached")
    outside = [m for m in error.member_defect_ids if m not in session.sample]
    if outside:
        raise BadReferenceError(
            f"systematic error members outside the session sample: {outside[:5]}"
        )
    return session._bump(systematic_errors=session.systematic_errors + (error,))


def run_diagnosis(
    session: Session,
    compiled: CompiledModel,
    trained: Network,
    problem_id: str,
    evidence: Mapping[str, str] | None,
    timestamp: str,
) -> tuple[Session, DiagnosticQuery]:
    """Query the trained network and append an immutable snapshot to the
    session's evidence ledger."""
    _require_step(session, Step.DETERMINE_CAUSES, "running a diagnosis")
    view: DiagnosisView = diagnose(compiled, trained, problem_id, evidence)
    query = DiagnosticQuery(
        problem_id=problem_id,
        evidence=tuple(sorted((evidence or {}).items())),
        result=view.as_dict(),
        timestamp=timestamp,
    )
    return session._bump(queries=session.queries + (query,)), query


def record_cause(
    session: Session,
    compiled: CompiledModel,
    systematic_error_id: str,
    problem_id: str,
    category_id: str,
    cause_id: str | None = None,
    cause_text: str | None = None,
    rationale: str = "",
) -> Session:
    _require_step(session, Step.DETERMINE_CAUSES, "recording a cause")
    model = compiled.model
    error = next(
        (e for e in session.systematic_errors if e.id == systematic_error_id), None
    )
    if error is None:
        raise BadReferenceError(f"unknown systematic error {systematic_error_id!r}")
    if not error.member_defect_ids:
        raise BadReferenceError(
            f"systematic error {systematic_error_id!r} has no member defects"
        )
    if problem_id not in model.problem_ids():
        raise BadReferenceError(f"unknown problem {problem_id!r}")
    if category_id not in {c.id for c in model.cause_categories}:
        raise BadReferenceError(f"unknown cause category {category_id!r}")
    if (cause_id is None) == (cause_text is None):
        raise BadReferenceError("exactly one of cause_id or cause_text is required")
    if cause_id is not None:
        if cause_id not in model.cause_ids():
            raise BadReferenceError(f"unknown cause {cause_id!r}")
        if model.category_of_cause(cause_id).id != category_id:
            raise BadReferenceError(
                f"cause {cause_id!r} does not belong to category {category_id!r}"
            )
    cause = DeterminedCause(
        id=f"dc-{len(session.determined_causes) + 1}",
        systematic_error_id=systematic_error_id,
        problem_id=problem_id,
        category_id=category_id,
        cause_id=cause_id,
        cause_text=cause_text,
        rationale=rationale,
    )
    return session._bump(determined_causes=session.determined_causes + (cause,))


def propose_action(
    session: Session,
    description: str,
    linked_cause_ids: Sequence[str],
    owner: str = "",
) -> Session:
    _require_step(session, Step.DEVELOP_ACTIONS, "proposing an action")
    linked = tuple(linked_cause_ids)
    if not linked:
        raise BadReferenceError("an action proposal needs at least one linked cause")
    known = {c.id for c in session.determined_causes}
    unknown = [c for c in linked if c not in known]
    if unknown:
        raise BadReferenceError(f"unknown determined causes {unknown}")
    action = ActionProposal(
        id=f"a-{len(session.actions) + 1}",
        linked_cause_ids=linked,
        description=description,
        owner=owner,
    )
    return session._bump(actions=session.actions + (action,))


def set_action_status(session: Session, action_id: str, status: str) -> Session:
    """Advance an action along proposed -> in_progress -> done."""
    if session.step not in (Step.DEVELOP_ACTIONS, Step.DOCUMENT):
        raise WrongStepError(
            "action status changes require the develop_actions or document step"
        )
    if status not in ACTION_STATUSES:
        raise IllegalStatusTransitionError(f"unknown status {status!r}")
    updated = []
    found = False
    for action in session.actions:
        if action.id != action_id:
            updated.append(action)
            continue
        found = True
        if ACTION_STATUSES.index(status) != ACTION_STATUSES.index(action.status) + 1:
            raise IllegalStatusTransitionError(
                f"cannot move action {action_id!r} from {action.status!r} to {status!r}"
            )
        updated.append(replace(action, status=status))
    if not found:
        raise BadReferenceError(f"unknown action {action_id!r}")
    return session._bump(actions=tuple(updated))


# --- serialization -----------------------------------------------------

def session_to_document(session: Session) -> dict:
    return {
        "format": "dcaw-session",
        "version": 1,
        "id": session.id,
        "created_at": session.created_at,
        "model_version_id": session.model_version_id,
        "step": session.step.value,
        "sample": list(session.sample),
        "systematic_errors": [
            {
                "id": e.id,
                "label": e.label,
                "defect_category": e.defect_category,
                "member_defect_ids": list(e.member_defect_ids),
                "iteration_id": e.iteration_id,
                "warnings": list(e.warnings),
            }
            for e in session.systematic_errors
        ],
        "queries": [
            {
                "problem_id": q.problem_id,
                "evidence": [list(pair) for pair in q.evidence],
                "result": q.result,
                "timestamp": q.timestamp,
            }
            for q in session.queries
        ],
        "determined_causes": [
            {
                "id": c.id,
                "systematic_error_id": c.systematic_error_id,
                "problem_id": c.problem_id,
                "category_id": c.category_id,
                "cause_id": c.cause_id,
                "cause_text": c.cause_text,
                "rationale": c.rationale,
            }
            for c in session.determined_causes
        ],
        "actions": [
            {
                "id": a.id,
                "linked_cause_ids": list(a.linked_cause_ids),
                "description": a.description,
                "owner": a.owner,
                "status": a.status,
            }
            for a in session.actions
        ],
        "revision": session.revision,
    }


def session_from_document(doc: Mapping) -> Session:
    return Session(
        id=doc["id"],
        created_at=doc["created_at"],
        model_version_id=doc["model_version_id"],
        step=Step(doc["step"]),
        sample=tuple(doc["sample"]),
        systematic_errors=tuple(
            SystematicError(
                id=e["id"],
                label=e["label"],
                defect_category=e["defect_category"],
                member_defect_ids=tuple(e["member_defect_ids"]),
                iteration_id=e["iteration_id"],
                warnings=tuple(e.get("warnings", [])),
            )
            for e in doc["systematic_errors"]
        ),
        queries=tuple(
            DiagnosticQuery(
                problem_id=q["problem_id"],
                evidence=tuple((k, v) for k, v in q["evidence"]),
                result=q["result"],
                timestamp=q["timestamp"],
            )
            for q in doc["queries"]
        ),
        determined_causes=tuple(
            DeterminedCause(**c) for c in doc["determined_causes"]
        ),
        actions=tuple(
            ActionProposal(
                id=a["id"],
                linked_cause_ids=tuple(a["linked_cause_ids"]),
                description=a["description"],
                owner=a["owner"],
                status=a["status"],
            )
            for a in doc["actions"]
        ),
        revision=doc["revision"],
    )
