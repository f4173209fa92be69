"""Deterministic generators for the shipped fixture files.

Run ``python -m dcaw.data.build`` to rewrite the files under this package.
A test asserts the shipped files match these generators, so the fixtures
stay reproducible and auditable.

The citation set is synthetic: problem citation counts follow the
published survey tallies (32/31/31/26/21 over five problems, 141 rows
total) and causes/effects are sampled from per-problem weights with a
fixed seed. The case-study defect data reproduces the published
per-iteration totals (69/181/214 defects over 69/292/416 function points
and 29/88/77 inspection hours) along with the defect-nature breakdown and
detail-tag counts of the largest iteration.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from dcaw.analytics.defects import DefectRecord, write_defects_csv
from dcaw.schema.model import CitationRecord, parse_model, write_citations_csv

SEED = 20160314

SAMPLE_MODEL = {
    "format": "dcaw-model",
    "version": 1,
    "model_version": "sample-1",
    "problems": [
        {"id": "communication_customer",
         "label": "Communication flaws between the project team and the customer"},
        {"id": "incomplete_hidden_requirements",
         "label": "Incomplete and/or hidden requirements"},
        {"id": "underspecified_requirements",
         "label": "Underspecified requirements"},
        {"id": "communication_team",
         "label": "Communication flaws within the project team"},
        {"id": "insufficient_customer_support",
         "label": "Insufficient support by customer"},
    ],
    "causes": [
        {"id": "missing_customer_engagement", "label": "Missing engagement from customer side"},
        {"id": "domain_complexity", "label": "Complexity of the domain"},
        {"id": "changing_requirements", "label": "Frequent changes of requirements"},
        {"id": "missing_inspection_meetings", "label": "Absence of inspection meetings"},
        {"id": "missing_completeness_check", "label": "Missing completeness check"},
        {"id": "lack_of_time", "label": "Lack of time"},
        {"id": "team_turnover", "label": "Changes in the team between iterations"},
        {"id": "missing_qualification", "label": "Missing qualification of RE team members"},
        {"id": "missing_domain_knowledge", "label": "Missing domain knowledge"},
        {"id": "lack_of_experience", "label": "Lack of experience of RE team members"},
        {"id": "language_barriers", "label": "Communication is difficult due to different languages"},
        {"id": "missing_traceability_tooling", "label": "Missing tool support for traceability"},
    ],
    "cause_categories": [
        {"id": "input", "label": "input",
         "members": ["missing_customer_engagement", "domain_complexity", "changing_requirements"]},
        {"id": "method", "label": "method",
         "members": ["missing_inspection_meetings", "missing_completeness_check"]},
        {"id": "organization", "label": "organization",
         "members": ["lack_of_time", "team_turnover"]},
        {"id": "people", "label": "people",
         "members": ["missing_qualification", "missing_domain_knowledge",
                      "lack_of_experience", "language_barriers"]},
        {"id": "tools", "label": "tools",
         "members": ["missing_traceability_tooling"]},
    ],
    "effects": [
        {"id": "customer_dissatisfaction", "label": "Customer dissatisfaction"},
        {"id": "loss_of_trust", "label": "Loss of customer trust"},
        {"id": "design_rework", "label": "Rework of the design"},
        {"id": "wrong_features", "label": "Implementation of wrong features"},
        {"id": "poor_product_quality", "label": "Poor product quality"},
        {"id": "cost_overrun", "label": "Cost overrun"},
        {"id": "schedule_overrun", "label": "Schedule overrun"},
        {"id": "extra_verification_effort", "label": "Additional verification effort"},
    ],
    "effect_categories": [
        {"id": "customer", "label": "customer",
         "members": ["customer_dissatisfaction", "loss_of_trust"]},
        {"id": "design_implementation", "label": "design or implementation",
         "members": ["design_rework", "wrong_features"]},
        {"id": "product", "label": "product", "members": ["poor_product_quality"]},
        {"id": "project_organization", "label": "project or organization",
         "members": ["cost_overrun", "schedule_overrun"]},
        {"id": "verification_validation", "label": "verification or validation",
         "members": ["extra_verification_effort"]},
    ],
}

# Citations per problem follow the published tallies; 141 rows total.
PROBLEM_CITATIONS = [
    ("communication_customer", 32),
    ("incomplete_hidden_requirements", 31),
    ("underspecified_requirements", 31),
    ("communication_team", 26),
    ("insufficient_customer_support", 21),
]

CAUSE_WEIGHTS = {
    "communication_customer": {
        "missing_customer_engagement": 0.50, "language_barriers": 0.35,
        "missing_qualification": 0.20, "lack_of_time": 0.25,
        "team_turnover": 0.10, "domain_complexity": 0.10,
    },
    "incomplete_hidden_requirements": {
        "missing_qualification": 0.55, "missing_domain_knowledge": 0.30,
        "lack_of_experience": 0.15, "missing_customer_engagement": 0.40,
        "missing_completeness_check": 0.25, "domain_complexity": 0.20,
        "language_barriers": 0.10,
    },
    "underspecified_requirements": {
        "missing_qualification": 0.40, "lack_of_experience": 0.30,
        "lack_of_time": 0.35, "missing_completeness_check": 0.30,
        "missing_inspection_meetings": 0.20,
    },
    "communication_team": {
        "team_turnover": 0.45, "language_barriers": 0.30,
        "missing_inspection_meetings": 0.25, "lack_of_time": 0.20,
        "missing_traceability_tooling": 0.15,
    },
    "insufficient_customer_support": {
        "missing_customer_engagement": 0.60, "lack_of_time": 0.30,
        "changing_requirements": 0.25, "domain_complexity": 0.10,
    },
}

EFFECT_WEIGHTS = {
    "communication_customer": {
        "customer_dissatisfaction": 0.40, "wrong_features": 0.25, "schedule_overrun": 0.20,
    },
    "incomplete_hidden_requirements": {
        "wrong_features": 0.35, "design_rework": 0.30,
        "cost_overrun": 0.20, "poor_product_quality": 0.15,
    },
    "underspecified_requirements": {
        "design_rework": 0.35, "extra_verification_effort": 0.30, "poor_product_quality": 0.20,
    },
    "communication_team": {
        "design_rework": 0.30, "schedule_overrun": 0.25, "extra_verification_effort": 0.15,
    },
    "insufficient_customer_support": {
        "schedule_overrun": 0.35, "customer_dissatisfaction": 0.30, "loss_of_trust": 0.25,
    },
}


def generate_sample_citations(seed: int = SEED) -> list[CitationRecord]:
    rng = np.random.default_rng(seed)
    records = []
    for problem_id, n in PROBLEM_CITATIONS:
        weights = CAUSE_WEIGHTS[problem_id]
        effect_weights = EFFECT_WEIGHTS[problem_id]
        for _ in range(n):
            causes = {c for c, w in weights.items() if rng.random() < w}
            if not causes:
                causes = {max(weights, key=lambda c: weights[c])}
            effects = {e for e, w in effect_weights.items() if rng.random() < w}
            records.append(CitationRecord(
                problem_id=problem_id,
                cited_causes=frozenset(causes),
                cited_effects=frozenset(effects),
                source="cross-company",
            ))
    return records


# --- case-study fixture ---------------------------------------------------

CASE_STUDY_HOURS = {"EL1": 29.0, "EL2": 88.0, "EL3": 77.0}


def _el1_units() -> list[tuple[str, float]]:
    sizes = [8, 9, 9, 8, 9, 9, 8, 9]
    return [(f"EL1-UC{i + 1:02d}", float(s)) for i, s in enumerate(sizes)]


def _el2_units() -> list[tuple[str, float]]:
    sizes = [12] * 17 + [11] * 8
    return [(f"EL2-UC{i + 1:02d}", float(s)) for i, s in enumerate(sizes)]


def _el3_units() -> list[tuple[str, float]]:
    sizes = [9, 16, 25] + [10] * 12 + [12] * 14 + [13] * 6
    return [(f"EL3-UC{i + 1:02d}", float(s)) for i, s in enumerate(sizes)]


def case_study_units() -> dict[str, list[tuple[str, float]]]:
    return {"EL1": _el1_units(), "EL2": _el2_units(), "EL3": _el3_units()}


# Defects per unit, aligned with the unit lists above. EL3-UC03 sits below
# its lower control limit and EL3-UC04 above its upper one; everything
# else is in control.
DEFECTS_PER_UNIT = {
    "EL1": [9, 8, 9, 8, 9, 9, 8, 9],
    "EL2": [7] * 17 + [8] * 7 + [6],
    "EL3": [5, 8, 1, 13] + [5] * 11 + [6] * 14 + [8] * 6,
}

# (nature, detail_tag, how many) per iteration; totals match the published
# counts (69 / 181 / 214) and the detail listing of the largest iteration.
NATURE_PLAN = {
    "EL1": [
        ("ambiguity", "underspecified_requirement", 7),
        ("ambiguity", None, 18),
        ("omission", "use_case_links", 5),
        ("omission", None, 15),
        ("incorrect fact", None, 12),
        ("inconsistent information", None, 8),
        ("extraneous information", None, 4),
    ],
    "EL2": [
        ("omission", "link_to_business_rules", 21),
        ("omission", "business_rules", 7),
        ("omission", None, 52),
        ("incorrect fact", "wrong_business_rule_link", 7),
        ("incorrect fact", "wrong_understanding", 10),
        ("incorrect fact", None, 28),
        ("inconsistent information", None, 26),
        ("ambiguity", None, 20),
        ("extraneous information", None, 10),
    ],
    "EL3": [
        ("omission", "business_rules", 11),
        ("omission", "link_to_business_rules", 10),
        ("omission", "actor", 10),
        ("omission", "prototype_details", 10),
        ("omission", "form_field", 7),
        ("omission", "mandatory_fields", 5),
        ("omission", None, 23),
        ("incorrect fact", "wrong_understanding", 19),
        ("incorrect fact", "wrong_business_rule_link", 6),
        ("incorrect fact", "wrong_use_case_flow", 6),
        ("incorrect fact", "wrong_prototype", 5),
        ("incorrect fact", None, 10),
        ("inconsistent information", None, 40),
        ("ambiguity", None, 32),
        ("extraneous information", None, 20),
    ],
}


def generate_case_study_defects() -> list[DefectRecord]:
    defects = []
    for iteration, units in case_study_units().items():
        slots: list[str] = []
        for (unit_id, _), count in zip(units, DEFECTS_PER_UNIT[iteration]):
            slots.extend([unit_id] * count)
        kinds: list[tuple[str, str | None]] = []
        for nature, tag, count in NATURE_PLAN[iteration]:
            kinds.extend([(nature, tag)] * count)
        assert len(slots) == len(kinds), (iteration, len(slots), len(kinds))
        # Interleave natures across units so every unit sees a mix.
        kinds = _interleave(kinds)
        for i, (unit_id, (nature, tag)) in enumerate(zip(slots, kinds)):
            defects.append(DefectRecord(
                id=f"{iteration}-D{i + 1:03d}",
                iteration_id=iteration,
                unit_id=unit_id,
                nature=nature,
                detail_tag=tag,
                description=f"{nature} found in {unit_id}"
                            + (f" ({tag.replace('_', ' ')})" if tag else ""),
            ))
    return defects


def _interleave(kinds: list[tuple[str, str | None]]) -> list[tuple[str, str | None]]:
    """Deterministic shuffle that spreads natures across unit slots."""
    n = len(kinds)
    stride = 7  # coprime with the iteration totals (69, 181, 214)
    out: list[tuple[str, str | None] | None] = [None] * n
    pos = 0
    for kind in kinds:
        while out[pos % n] is not None:
            pos += 1
        out[pos % n] = kind
        pos += stride
    return [k for k in out if k is not None]


def write_fixtures(directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    model = parse_model(SAMPLE_MODEL)

    (directory / "sample_model.json").write_text(
        json.dumps(SAMPLE_MODEL, indent=2) + "\n"
    )
    (directory / "sample_citations.csv").write_text(
        write_citations_csv(model, generate_sample_citations())
    )
    (directory / "case_study_defects.csv").write_text(
        write_defects_csv(generate_case_study_defects())
    )
    units_lines = ["iteration,unit,size_fp"]
    for iteration, units in case_study_units().items():
        units_lines += [f"{iteration},{uid},{int(size)}" for uid, size in units]
    (directory / "case_study_units.csv").write_text("\n".join(units_lines) + "\n")
    effort_lines = ["iteration,hours"]
    effort_lines += [f"{it},{int(h)}" for it, h in CASE_STUDY_HOURS.items()]
    (directory / "case_study_effort.csv").write_text("\n".join(effort_lines) + "\n")


if __name__ == "__main__":
    write_fixtures(Path(__file__).parent)
