"""DCA meeting lifecycle: the six-step state machine, the evidence-driven
diagnosis loop, action tracking, reports, and the retrain cycle."""

from dcaw.session.state import (
    STEP_ORDER,
    ActionProposal,
    DeterminedCause,
    DiagnosticQuery,
    Session,
    Step,
    advance,
    attach_systematic_error,
    create_session,
    propose_action,
    record_cause,
    run_diagnosis,
    session_from_document,
    session_to_document,
    set_action_status,
    set_sample,
)
from dcaw.session.report import ReportContext, generate_report, render_report_text
from dcaw.session.versions import (
    ModelVersion,
    contribute_and_retrain,
    version_from_document,
    version_to_document,
)

__all__ = [
    "STEP_ORDER",
    "ActionProposal",
    "DeterminedCause",
    "DiagnosticQuery",
    "ModelVersion",
    "ReportContext",
    "Session",
    "Step",
    "advance",
    "attach_systematic_error",
    "contribute_and_retrain",
    "create_session",
    "generate_report",
    "propose_action",
    "record_cause",
    "render_report_text",
    "run_diagnosis",
    "session_from_document",
    "session_to_document",
    "set_action_status",
    "set_sample",
    "version_from_document",
    "version_to_document",
]
