"""Shipped fixtures: sample cause-effect model, synthetic citation set,
and the case-study inspection data."""

from __future__ import annotations

from importlib import resources

from dcaw.analytics.defects import (
    DefectRecord,
    IterationStats,
    build_iteration_stats,
    read_defects_csv,
    read_effort_csv,
    read_units_csv,
)
from dcaw.schema.model import CauseEffectModel, CitationRecord, parse_model, read_citations_csv


def _read(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text()


def sample_model_document() -> dict:
    import json

    return json.loads(_read("sample_model.json"))


def sample_model() -> CauseEffectModel:
    return parse_model(sample_model_document())


def sample_citations() -> list[CitationRecord]:
    return read_citations_csv(sample_model(), _read("sample_citations.csv"))


def case_study_defects() -> list[DefectRecord]:
    return read_defects_csv(_read("case_study_defects.csv"))


def case_study_stats() -> dict[str, IterationStats]:
    return build_iteration_stats(
        read_units_csv(_read("case_study_units.csv")),
        read_effort_csv(_read("case_study_effort.csv")),
    )
