"""Diagnostic inference: cause posteriors given an observed problem.

Sets the selected problem variable true, merges the caller's cause
evidence, and ranks cause categories and the causes within them by
posterior probability (ties broken alphabetically by label).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from dcaw.bn.inference import posterior
from dcaw.bn.network import Network
from dcaw.errors import InvalidEvidenceError, UnknownIdError
from dcaw.schema.compile import CompiledModel


@dataclass(frozen=True)
class CauseDiagnosis:
    cause_id: str
    label: str
    probability: float


@dataclass(frozen=True)
class CategoryDiagnosis:
    category_id: str
    label: str
    probability: float
    causes: tuple[CauseDiagnosis, ...]


@dataclass(frozen=True)
class DiagnosisView:
    problem_id: str
    evidence: dict[str, str]
    categories: tuple[CategoryDiagnosis, ...]

    def as_dict(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "evidence": dict(self.evidence),
            "categories": [
                {
                    "category_id": cat.category_id,
                    "label": cat.label,
                    "probability": cat.probability,
                    "causes": [
                        {
                            "cause_id": c.cause_id,
                            "label": c.label,
                            "probability": c.probability,
                        }
                        for c in cat.causes
                    ],
                }
                for cat in self.categories
            ],
        }


def diagnose(
    compiled: CompiledModel,
    trained: Network,
    problem_id: str,
    evidence: Mapping[str, str] | None = None,
) -> DiagnosisView:
    model = compiled.model
    if problem_id not in model.problem_ids():
        raise UnknownIdError(f"unknown problem {problem_id!r}")
    evidence = dict(evidence or {})
    cause_ids = set(model.cause_ids())
    for key, state in evidence.items():
        if key not in cause_ids:
            raise InvalidEvidenceError(
                f"diagnosis evidence must assign cause variables only, got {key!r}"
            )
        if state not in ("true", "false"):
            raise InvalidEvidenceError(
                f"evidence state for {key!r} must be 'true' or 'false', got {state!r}"
            )

    problem_var = compiled.variable_for(problem_id)
    full_evidence = {compiled.variable_for(k): v for k, v in evidence.items()}
    full_evidence[problem_var] = "true"

    targets = [compiled.variable_for(c.id) for c in model.cause_categories]
    targets += [compiled.variable_for(c) for c in model.cause_ids()]
    marginals = posterior(trained, full_evidence, targets)

    def p_true(model_id: str) -> float:
        var = compiled.variable_for(model_id)
        vec = marginals[var]
        return float(vec[trained.var(var).state_index("true")])

    categories = []
    for cat in model.cause_categories:
        causes = [
            CauseDiagnosis(cid, model.label_of(cid), p_true(cid))
            for cid in cat.members
        ]
        causes.sort(key=lambda c: (-c.probability, c.label))
        categories.append(CategoryDiagnosis(cat.id, cat.label, p_true(cat.id), tuple(causes)))
    categories.sort(key=lambda c: (-c.probability, c.label))

    return DiagnosisView(problem_id, evidence, tuple(categories))
