"""The shipped fixture files must match their deterministic generators."""

import json
from collections import Counter
from importlib import resources

import dcaw.data as data
from dcaw.analytics.defects import write_defects_csv
from dcaw.data import build
from dcaw.schema.model import parse_model, write_citations_csv


def read_shipped(name: str) -> str:
    return resources.files("dcaw.data").joinpath(name).read_text()


def test_sample_model_matches_generator():
    assert json.loads(read_shipped("sample_model.json")) == build.SAMPLE_MODEL


def test_citations_match_generator():
    model = parse_model(build.SAMPLE_MODEL)
    expected = write_citations_csv(model, build.generate_sample_citations())
    assert read_shipped("sample_citations.csv") == expected


def test_defects_match_generator():
    expected = write_defects_csv(build.generate_case_study_defects())
    assert read_shipped("case_study_defects.csv") == expected


def test_citation_problem_tallies():
    counts = Counter(c.problem_id for c in data.sample_citations())
    assert counts == {
        "communication_customer": 32,
        "incomplete_hidden_requirements": 31,
        "underspecified_requirements": 31,
        "communication_team": 26,
        "insufficient_customer_support": 21,
    }
    assert sum(counts.values()) == 141


def test_every_citation_has_a_cause():
    assert all(c.cited_causes for c in data.sample_citations())


def test_case_study_totals():
    defects = data.case_study_defects()
    stats = data.case_study_stats()
    per_iteration = Counter(d.iteration_id for d in defects)
    assert per_iteration == {"EL1": 69, "EL2": 181, "EL3": 214}
    assert stats["EL1"].total_size == 69
    assert stats["EL2"].total_size == 292
    assert stats["EL3"].total_size == 416
    assert stats["EL1"].inspection_effort_hours == 29
    assert stats["EL2"].inspection_effort_hours == 88
    assert stats["EL3"].inspection_effort_hours == 77
    assert len(stats["EL1"].units) == 8
    assert len(stats["EL2"].units) == 25
    assert len(stats["EL3"].units) == 35


def test_el3_nature_breakdown():
    el3 = [d for d in data.case_study_defects() if d.iteration_id == "EL3"]
    natures = Counter(d.nature for d in el3)
    assert natures["omission"] == 76
    assert natures["incorrect fact"] == 46
    tags = Counter(d.detail_tag for d in el3 if d.detail_tag)
    assert tags["business_rules"] == 11
    assert tags["link_to_business_rules"] == 10
    assert tags["actor"] == 10
    assert tags["prototype_details"] == 10
    assert tags["form_field"] == 7
    assert tags["mandatory_fields"] == 5
    assert tags["wrong_understanding"] == 19
    assert tags["wrong_business_rule_link"] == 6
    assert tags["wrong_use_case_flow"] == 6
    assert tags["wrong_prototype"] == 5


def test_el2_group_tags():
    el2 = [d for d in data.case_study_defects() if d.iteration_id == "EL2"]
    tags = Counter(d.detail_tag for d in el2 if d.detail_tag)
    assert tags["link_to_business_rules"] == 21
    assert tags["business_rules"] == 7
    assert tags["wrong_business_rule_link"] == 7
