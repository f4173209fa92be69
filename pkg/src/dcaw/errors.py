"""Exception hierarchy shared across the workbench.

Every error carries a stable machine-readable ``code`` (used by the HTTP
API and the CLI) and an ``exit_code`` classifying it as a validation
failure (1) or a runtime failure (2).
"""

from __future__ import annotations


class DcawError(Exception):
    """Base class for all workbench errors."""

    code = "error"
    exit_code = 2

    def __init__(self, message: str, detail: object = None):
        super().__init__(message)
        self.detail = detail

    @property
    def message(self) -> str:
        return str(self)


class ValidationFailure(DcawError):
    """Input failed validation; maps to CLI exit code 1 / HTTP 400."""

    code = "validation"
    exit_code = 1


# --- bn ---------------------------------------------------------------

class InvalidNetworkError(ValidationFailure):
    code = "invalid-network"


class InvalidEvidenceError(ValidationFailure):
    code = "invalid-evidence"


class StateSpaceTooLargeError(DcawError):
    code = "state-space-too-large"


class EvidenceInconsistentError(DcawError):
    """Evidence has probability zero under the model."""

    code = "evidence-inconsistent"


class TooManyParentsError(ValidationFailure):
    code = "too-many-parents"


# --- learn ------------------------------------------------------------

class IncompleteRecordError(ValidationFailure):
    code = "incomplete-record"


class InvalidRecordError(ValidationFailure):
    code = "invalid-record"


class ImpossibleRecordError(DcawError):
    """A record has probability zero under the current parameters."""

    code = "impossible-record"


# --- schema -----------------------------------------------------------

class ModelFormatError(ValidationFailure):
    """Cause-effect model document violates an invariant.

    ``code`` is set per instance: duplicate-id, cause-in-multiple-categories,
    orphan-member-reference, no-problems, bad-document.
    """

    def __init__(self, code: str, message: str, detail: object = None):
        super().__init__(message, detail)
        self.code = code


class UnknownIdError(ValidationFailure):
    code = "unknown-id"


# --- analytics --------------------------------------------------------

class UnknownUnitError(ValidationFailure):
    code = "unknown-unit"


class UnknownDefectError(ValidationFailure):
    code = "unknown-defect"


class CrossIterationMemberError(ValidationFailure):
    code = "cross-iteration-member"


# --- session ----------------------------------------------------------

class StepSkipError(ValidationFailure):
    code = "step-skip"


class GateUnsatisfiedError(ValidationFailure):
    code = "gate-unsatisfied"


class WrongStepError(ValidationFailure):
    code = "wrong-step"


class BadReferenceError(ValidationFailure):
    code = "bad-reference"


class IllegalStatusTransitionError(ValidationFailure):
    code = "illegal-status-transition"


class UnmappedFreeTextCauseError(ValidationFailure):
    code = "unmapped-free-text-cause"


class LearnFailureError(DcawError):
    code = "learn-failure"


# --- service / store --------------------------------------------------

class NotFoundError(DcawError):
    code = "not-found"


class ConflictError(DcawError):
    code = "conflict"


class StoreSchemaError(DcawError):
    code = "store-schema"
