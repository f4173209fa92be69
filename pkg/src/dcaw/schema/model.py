"""Cause-effect model documents and citation records.

A model names problems, causes grouped into cause categories, and effects
grouped into effect categories. A citation record is one respondent's
report: a problem together with the causes and effects they cited.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from dcaw.errors import ModelFormatError, UnknownIdError
from dcaw.learn.records import PROVENANCE_TAGS

MODEL_FORMAT = "dcaw-model"
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Entity:
    id: str
    label: str


@dataclass(frozen=True)
class Category:
    id: str
    label: str
    members: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class CauseEffectModel:
    problems: tuple[Entity, ...]
    causes: tuple[Entity, ...]
    cause_categories: tuple[Category, ...]
    effects: tuple[Entity, ...]
    effect_categories: tuple[Category, ...]
    version: str = "1"

    def problem_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.problems)

    def cause_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.causes)

    def effect_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.effects)

    def label_of(self, entity_id: str) -> str:
        for group in (self.problems, self.causes, self.cause_categories,
                      self.effects, self.effect_categories):
            for item in group:
                if item.id == entity_id:
                    return item.label
        raise UnknownIdError(f"unknown model id {entity_id!r}")

    def category_of_cause(self, cause_id: str) -> Category:
        for cat in self.cause_categories:
            if cause_id in cat.members:
                return cat
        raise UnknownIdError(f"cause {cause_id!r} has no category")


@dataclass(frozen=True)
class CitationRecord:
    problem_id: str
    cited_causes: frozenset[str] = frozenset()
    cited_effects: frozenset[str] = frozenset()
    source: str = "cross-company"

    def __post_init__(self):
        object.__setattr__(self, "cited_causes", frozenset(self.cited_causes))
        object.__setattr__(self, "cited_effects", frozenset(self.cited_effects))
        if self.source not in PROVENANCE_TAGS:
            raise ModelFormatError("bad-document", f"unknown source tag {self.source!r}")

    def validate_against(self, model: CauseEffectModel) -> None:
        if self.problem_id not in model.problem_ids():
            raise UnknownIdError(f"unknown problem {self.problem_id!r}")
        bad = self.cited_causes - set(model.cause_ids())
        if bad:
            raise UnknownIdError(f"unknown causes {sorted(bad)}")
        bad = self.cited_effects - set(model.effect_ids())
        if bad:
            raise UnknownIdError(f"unknown effects {sorted(bad)}")


def _check_memberships(
    kind: str,
    categories: Sequence[Category],
    entities: Sequence[Entity],
) -> None:
    entity_ids = {e.id for e in entities}
    owner: dict[str, str] = {}
    for cat in categories:
        for member in cat.members:
            if member not in entity_ids:
                raise ModelFormatError(
                    "orphan-member-reference",
                    f"category {cat.id!r} references unknown {kind} {member!r}",
                )
            if member in owner:
                raise ModelFormatError(
                    f"{kind}-in-multiple-categories",
                    f"{kind} {member!r} appears in categories {owner[member]!r} and {cat.id!r}",
                )
            owner[member] = cat.id
    uncategorized = sorted(entity_ids - set(owner))
    if uncategorized:
        raise ModelFormatError(
            "uncategorized-entity",
            f"every {kind} needs a category; missing for {uncategorized}",
        )


def validate_model(model: CauseEffectModel) -> None:
    if not model.problems:
        raise ModelFormatError("no-problems", "a model needs at least one problem")
    seen: set[str] = set()
    for group in (model.problems, model.causes, model.cause_categories,
                  model.effects, model.effect_categories):
        for item in group:
            if item.id in seen:
                raise ModelFormatError("duplicate-id", f"id {item.id!r} appears twice")
            seen.add(item.id)
    _check_memberships("cause", model.cause_categories, model.causes)
    _check_memberships("effect", model.effect_categories, model.effects)


def parse_model(document: Mapping | str) -> CauseEffectModel:
    """Parse and fully validate a model document (mapping or JSON text)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ModelFormatError("bad-document", f"invalid JSON: {exc}") from exc
    model = model_from_document(document)
    validate_model(model)
    return model


def model_from_document(doc: Mapping) -> CauseEffectModel:
    if not isinstance(doc, Mapping):
        raise ModelFormatError("bad-document", "model document must be a mapping")
    if doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError("bad-document", f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            "bad-document", f"unsupported document version {doc.get('version')!r}"
        )
    try:
        def entities(key: str) -> tuple[Entity, ...]:
            return tuple(Entity(e["id"], e.get("label", e["id"])) for e in doc.get(key, []))

        def categories(key: str) -> tuple[Category, ...]:
            return tuple(
                Category(c["id"], c.get("label", c["id"]), tuple(c.get("members", [])))
                for c in doc.get(key, [])
            )

        return CauseEffectModel(
            problems=entities("problems"),
            causes=entities("causes"),
            cause_categories=categories("cause_categories"),
            effects=entities("effects"),
            effect_categories=categories("effect_categories"),
            version=str(doc.get("model_version", "1")),
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError("bad-document", f"malformed model document: {exc}") from exc


def model_to_document(model: CauseEffectModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "model_version": model.version,
        "problems": [{"id": e.id, "label": e.label} for e in model.problems],
        "causes": [{"id": e.id, "label": e.label} for e in model.causes],
        "cause_categories": [
            {"id": c.id, "label": c.label, "members": list(c.members)}
            for c in model.cause_categories
        ],
        "effects": [{"id": e.id, "label": e.label} for e in model.effects],
        "effect_categories": [
            {"id": c.id, "label": c.label, "members": list(c.members)}
            for c in model.effect_categories
        ],
    }


# --- citation record file (the spreadsheet shape) -----------------------

def write_citations_csv(
    model: CauseEffectModel,
    records: Sequence[CitationRecord],
    include_source: bool = False,
) -> str:
    """One row per citation: problem id plus a 0/1 column per cause/effect."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = (["_source"] if include_source else []) + ["problem"]
    header += list(model.cause_ids()) + list(model.effect_ids())
    writer.writerow(header)
    for rec in records:
        rec.validate_against(model)
        row = ([rec.source] if include_source else []) + [rec.problem_id]
        row += ["1" if c in rec.cited_causes else "0" for c in model.cause_ids()]
        row += ["1" if e in rec.cited_effects else "0" for e in model.effect_ids()]
        writer.writerow(row)
    return out.getvalue()


def read_citations_csv(model: CauseEffectModel, text: str) -> list[CitationRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ModelFormatError("bad-document", "citation file is empty") from None
    has_source = bool(header) and header[0] == "_source"
    columns = header[1:] if has_source else header
    if not columns or columns[0] != "problem":
        raise ModelFormatError("bad-document", "citation file must start with a problem column")
    ids = columns[1:]
    known = set(model.cause_ids()) | set(model.effect_ids())
    unknown = sorted(set(ids) - known)
    if unknown:
        raise UnknownIdError(f"citation file has unknown columns {unknown}")
    records: list[CitationRecord] = []
    cause_ids = set(model.cause_ids())
    for i, row in enumerate(reader):
        if not row:
            continue
        if len(row) != len(columns) + (1 if has_source else 0):
            raise ModelFormatError("bad-document", f"citation row {i + 1} has the wrong cell count")
        source = row[0] if has_source else "cross-company"
        cells = row[1:] if has_source else row
        problem = cells[0]
        cited = {vid for vid, cell in zip(ids, cells[1:]) if cell == "1"}
        rec = CitationRecord(
            problem_id=problem,
            cited_causes=frozenset(cited & cause_ids),
            cited_effects=frozenset(cited - cause_ids),
            source=source,
        )
        rec.validate_against(model)
        records.append(rec)
    return records
