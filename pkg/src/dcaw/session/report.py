"""Meeting report: structured document plus a printable text rendering.

The report is a pure function of the session and the defect context, so
regenerating it is byte-identical. Six sections, in order: session
header, sample summary (with Pareto and U-chart data per iteration),
systematic errors with member counts, determined causes per error, action
proposals, and the full evidence ledger.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from dcaw.analytics.charts import pareto, u_chart
from dcaw.analytics.defects import DefectRecord, IterationStats
from dcaw.errors import BadReferenceError, WrongStepError
from dcaw.session.state import Session, Step

REPORT_FORMAT = "dcaw-report"
REPORT_VERSION = 1


@dataclass(frozen=True)
class ReportContext:
    defects_by_id: Mapping[str, DefectRecord]
    stats_by_iteration: Mapping[str, IterationStats] = field(default_factory=dict)


def generate_report(session: Session, ctx: ReportContext) -> dict:
    if session.step != Step.DOCUMENT:
        raise WrongStepError("report generation requires the document step")
    missing = [d for d in session.sample if d not in ctx.defects_by_id]
    if missing:
        raise BadReferenceError(f"sample defects missing from context: {missing[:5]}")
    sample_defects = [ctx.defects_by_id[d] for d in session.sample]

    iterations = sorted({d.iteration_id for d in sample_defects})
    sample_summary = []
    for iteration in iterations:
        subset = [d for d in sample_defects if d.iteration_id == iteration]
        stats = ctx.stats_by_iteration.get(iteration)
        sample_summary.append({
            "iteration_id": iteration,
            "defect_count": len(subset),
            "pareto": pareto(subset).as_dict(),
            "u_chart": u_chart(stats, subset).as_dict() if stats else None,
        })

    causes_by_error: dict[str, list[dict]] = {}
    for cause in session.determined_causes:
        causes_by_error.setdefault(cause.systematic_error_id, []).append({
            "id": cause.id,
            "problem_id": cause.problem_id,
            "category_id": cause.category_id,
            "cause_id": cause.cause_id,
            "cause_text": cause.cause_text,
            "rationale": cause.rationale,
        })

    return {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "session": {
            "id": session.id,
            "created_at": session.created_at,
            "model_version_id": session.model_version_id,
            "step": session.step.value,
        },
        "sample": {
            "defect_count": len(sample_defects),
            "iterations": sample_summary,
        },
        "systematic_errors": [
            {
                "id": e.id,
                "label": e.label,
                "defect_category": e.defect_category,
                "iteration_id": e.iteration_id,
                "member_count": e.member_count,
            }
            for e in session.systematic_errors
        ],
        "determined_causes": [
            {
                "systematic_error_id": e.id,
                "systematic_error_label": e.label,
                "causes": causes_by_error.get(e.id, []),
            }
            for e in session.systematic_errors
        ],
        "actions": [
            {
                "id": a.id,
                "description": a.description,
                "owner": a.owner,
                "status": a.status,
                "linked_cause_ids": list(a.linked_cause_ids),
            }
            for a in session.actions
        ],
        "evidence_ledger": [
            {
                "index": i,
                "problem_id": q.problem_id,
                "evidence": [list(pair) for pair in q.evidence],
                "timestamp": q.timestamp,
                "result": q.result,
            }
            for i, q in enumerate(session.queries)
        ],
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_report_text(report: dict) -> str:
    """Plain-text rendering, printable at the end of a meeting."""
    lines: list[str] = []

    def heading(title: str) -> None:
        lines.append(title)
        lines.append("=" * len(title))

    info = report["session"]
    heading(f"Analysis session {info['id']}")
    lines.append(f"created: {info['created_at']}")
    lines.append(f"model version: {info['model_version_id']}")
    lines.append("")

    heading("Sample")
    lines.append(f"defects in sample: {report['sample']['defect_count']}")
    for block in report["sample"]["iterations"]:
        lines.append(f"- iteration {block['iteration_id']}: {block['defect_count']} defects")
        for entry in block["pareto"]["entries"]:
            lines.append(
                f"    {entry['category']}: {entry['count']}"
                f" ({entry['share']:.1%}, cumulative {entry['cumulative_share']:.1%})"
            )
        if block["u_chart"]:
            chart = block["u_chart"]
            lines.append(f"    u-chart center line: {chart['center_line']:.4f} per {chart['unit_kind']}")
            flagged = [p for p in chart["points"] if p["flagged"]]
            if flagged:
                lines.append(
                    "    out of control: "
                    + ", ".join(f"{p['unit_id']} ({p['rate']:.3f})" for p in flagged)
                )
    lines.append("")

    heading("Systematic errors")
    for err in report["systematic_errors"]:
        lines.append(
            f"- {err['label']} [{err['defect_category']}] "
            f"({err['member_count']} defects, {err['iteration_id']})"
        )
    lines.append("")

    heading("Determined causes")
    for block in report["determined_causes"]:
        lines.append(f"- {block['systematic_error_label']}:")
        for cause in block["causes"]:
            name = cause["cause_id"] or cause["cause_text"]
            note = f" -- {cause['rationale']}" if cause["rationale"] else ""
            lines.append(f"    {name} [{cause['category_id']}]{note}")
    lines.append("")

    heading("Action proposals")
    for action in report["actions"]:
        owner = f" (owner: {action['owner']})" if action["owner"] else ""
        lines.append(f"- [{action['status']}] {action['description']}{owner}")
    lines.append("")

    heading("Evidence ledger")
    for entry in report["evidence_ledger"]:
        ev = ", ".join(f"{k}={v}" for k, v in entry["evidence"]) or "no evidence"
        lines.append(f"- query {entry['index'] + 1}: problem {entry['problem_id']}, {ev}")
        for cat in entry["result"]["categories"]:
            lines.append(f"    {cat['label']}: {cat['probability']:.3f}")
    lines.append("")
    return "\n".join(lines)
