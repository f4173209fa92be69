"""Convert citation records to learning assignments and back.

Encoding rules: the cited problem variable is true and the other problem
variables stay missing (a respondent describing one problem says nothing
about the others); cited causes/effects are true and non-cited ones false
(respondents were asked for the causes of that problem); category
variables stay missing so learning respects the OR constraint.
"""

from __future__ import annotations

from typing import Sequence

from dcaw.errors import InvalidRecordError
from dcaw.learn.records import RecordSet
from dcaw.schema.compile import CompiledModel
from dcaw.schema.model import CauseEffectModel, CitationRecord


def records_to_assignments(
    model: CauseEffectModel,
    compiled: CompiledModel,
    records: Sequence[CitationRecord],
) -> RecordSet:
    rows = []
    provenance = []
    for rec in records:
        rec.validate_against(model)
        row: dict[str, str] = {compiled.variable_for(rec.problem_id): "true"}
        for cause_id in model.cause_ids():
            row[compiled.variable_for(cause_id)] = (
                "true" if cause_id in rec.cited_causes else "false"
            )
        for effect_id in model.effect_ids():
            row[compiled.variable_for(effect_id)] = (
                "true" if effect_id in rec.cited_effects else "false"
            )
        rows.append(row)
        provenance.append(rec.source)
    return RecordSet(tuple(rows), tuple(provenance))


def assignments_to_citation(
    model: CauseEffectModel,
    compiled: CompiledModel,
    assignment: dict[str, str],
    source: str = "cross-company",
) -> CitationRecord:
    """Decode one learning row back into a citation record."""
    problems = [
        p for p in model.problem_ids()
        if assignment.get(compiled.variable_for(p)) == "true"
    ]
    if len(problems) != 1:
        raise InvalidRecordError(
            f"assignment marks {len(problems)} problems true, expected exactly 1"
        )
    causes = frozenset(
        c for c in model.cause_ids()
        if assignment.get(compiled.variable_for(c)) == "true"
    )
    effects = frozenset(
        e for e in model.effect_ids()
        if assignment.get(compiled.variable_for(e)) == "true"
    )
    return CitationRecord(problems[0], causes, effects, source)
