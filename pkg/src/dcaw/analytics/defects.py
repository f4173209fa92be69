"""Defect records, iteration stats, and their delimited-text formats.

Defect natures form a closed five-value taxonomy so Pareto comparisons
stay meaningful across sessions; extending it requires a schema version
bump.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from dcaw.errors import InvalidRecordError

NATURE_VALUES = (
    "ambiguity",
    "extraneous information",
    "inconsistent information",
    "incorrect fact",
    "omission",
)


@dataclass(frozen=True)
class DefectRecord:
    id: str
    iteration_id: str
    unit_id: str
    nature: str
    description: str = ""
    detail_tag: str | None = None
    systematic_error_id: str | None = None

    def __post_init__(self):
        if self.nature not in NATURE_VALUES:
            raise InvalidRecordError(
                f"defect {self.id!r}: nature {self.nature!r} not in taxonomy {NATURE_VALUES}"
            )


@dataclass(frozen=True)
class UnitSize:
    unit_id: str
    size_fp: float

    def __post_init__(self):
        if self.size_fp <= 0:
            raise InvalidRecordError(f"unit {self.unit_id!r} size must be positive")


@dataclass(frozen=True)
class IterationStats:
    iteration_id: str
    units: tuple[UnitSize, ...]
    inspection_effort_hours: float

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        ids = [u.unit_id for u in self.units]
        if len(set(ids)) != len(ids):
            raise InvalidRecordError(
                f"iteration {self.iteration_id!r} has duplicate unit ids"
            )
        if self.inspection_effort_hours <= 0:
            raise InvalidRecordError(
                f"iteration {self.iteration_id!r} inspection effort must be positive"
            )

    @property
    def total_size(self) -> float:
        return sum(u.size_fp for u in self.units)


@dataclass(frozen=True)
class SystematicError:
    id: str
    label: str
    defect_category: str
    member_defect_ids: tuple[str, ...]
    iteration_id: str
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "member_defect_ids", tuple(self.member_defect_ids))
        if self.defect_category not in NATURE_VALUES:
            raise InvalidRecordError(
                f"systematic error {self.id!r}: unknown defect category {self.defect_category!r}"
            )

    @property
    def member_count(self) -> int:
        return len(self.member_defect_ids)


# --- delimited-text formats ---------------------------------------------

DEFECT_COLUMNS = ("id", "iteration", "unit", "nature", "detail_tag", "description")


def write_defects_csv(defects: Sequence[DefectRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DEFECT_COLUMNS)
    for d in defects:
        writer.writerow([d.id, d.iteration_id, d.unit_id, d.nature,
                         d.detail_tag or "", d.description])
    return out.getvalue()


def read_defects_csv(text: str) -> list[DefectRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InvalidRecordError("defect file is empty") from None
    if tuple(header) != DEFECT_COLUMNS:
        raise InvalidRecordError(
            f"defect file header must be {','.join(DEFECT_COLUMNS)}"
        )
    defects = []
    for i, row in enumerate(reader):
        if not row:
            continue
        if len(row) != len(DEFECT_COLUMNS):
            raise InvalidRecordError(f"defect row {i + 1} has the wrong cell count")
        defects.append(DefectRecord(
            id=row[0], iteration_id=row[1], unit_id=row[2], nature=row[3],
            detail_tag=row[4] or None, description=row[5],
        ))
    ids = [d.id for d in defects]
    if len(set(ids)) != len(ids):
        raise InvalidRecordError("defect file contains duplicate defect ids")
    return defects


def read_units_csv(text: str) -> dict[str, list[UnitSize]]:
    """(iteration, unit, size_fp) rows grouped by iteration."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != ("iteration", "unit", "size_fp"):
        raise InvalidRecordError("units file header must be iteration,unit,size_fp")
    grouped: dict[str, list[UnitSize]] = {}
    for row in reader:
        if not row:
            continue
        try:
            grouped.setdefault(row[0], []).append(UnitSize(row[1], float(row[2])))
        except (IndexError, ValueError) as exc:
            raise InvalidRecordError(f"bad units row {row!r}: {exc}") from exc
    return grouped


def read_effort_csv(text: str) -> dict[str, float]:
    """(iteration, hours) rows."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != ("iteration", "hours"):
        raise InvalidRecordError("effort file header must be iteration,hours")
    hours: dict[str, float] = {}
    for row in reader:
        if not row:
            continue
        try:
            hours[row[0]] = float(row[1])
        except (IndexError, ValueError) as exc:
            raise InvalidRecordError(f"bad effort row {row!r}: {exc}") from exc
    return hours


def build_iteration_stats(
    units_by_iteration: dict[str, list[UnitSize]],
    hours_by_iteration: dict[str, float],
) -> dict[str, IterationStats]:
    stats = {}
    for iteration, units in units_by_iteration.items():
        if iteration not in hours_by_iteration:
            raise InvalidRecordError(f"no inspection effort recorded for {iteration!r}")
        stats[iteration] = IterationStats(iteration, tuple(units), hours_by_iteration[iteration])
    return stats
