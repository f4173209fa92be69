"""Pareto charts, U-charts, density/efficiency metrics, defect grouping.

U-chart limits are the Poisson three-sigma limits with per-point sample
sizes: ucl_i = u-bar + 3*sqrt(u-bar/n_i), lcl_i clamped at zero. Points
exactly on a limit are in control (strict inequality flags only).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from dcaw.analytics.defects import (
    DefectRecord,
    IterationStats,
    SystematicError,
)
from dcaw.errors import (
    CrossIterationMemberError,
    InvalidRecordError,
    UnknownDefectError,
    UnknownUnitError,
)


@dataclass(frozen=True)
class ParetoEntry:
    category: str
    count: int
    share: float
    cumulative_share: float


@dataclass(frozen=True)
class ParetoResult:
    entries: tuple[ParetoEntry, ...]
    total: int

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "entries": [
                {
                    "category": e.category,
                    "count": e.count,
                    "share": e.share,
                    "cumulative_share": e.cumulative_share,
                }
                for e in self.entries
            ],
        }


@dataclass(frozen=True)
class UChartPoint:
    unit_id: str
    size: float
    defect_count: int
    rate: float
    ucl: float
    lcl: float
    flagged: bool


@dataclass(frozen=True)
class UChartResult:
    center_line: float
    unit_kind: str
    points: tuple[UChartPoint, ...]

    def as_dict(self) -> dict:
        return {
            "center_line": self.center_line,
            "unit_kind": self.unit_kind,
            "points": [
                {
                    "unit_id": p.unit_id,
                    "size": p.size,
                    "defect_count": p.defect_count,
                    "rate": p.rate,
                    "ucl": p.ucl,
                    "lcl": p.lcl,
                    "flagged": p.flagged,
                }
                for p in self.points
            ],
        }


def pareto(defects: Sequence[DefectRecord]) -> ParetoResult:
    """Defect counts per nature, descending, with shares and cumulative shares."""
    if not defects:
        raise InvalidRecordError("pareto needs at least one defect")
    counts = Counter(d.nature for d in defects)
    total = sum(counts.values())
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = []
    running = 0
    for category, count in ordered:
        running += count
        entries.append(ParetoEntry(category, count, count / total, running / total))
    return ParetoResult(tuple(entries), total)


def _u_chart_points(
    sizes: Sequence[tuple[str, float]],
    count_by_unit: dict[str, int],
    unit_kind: str,
) -> UChartResult:
    total_defects = sum(count_by_unit.values())
    total_size = sum(size for _, size in sizes)
    u_bar = total_defects / total_size
    points = []
    for unit_id, size in sizes:
        count = count_by_unit.get(unit_id, 0)
        rate = count / size
        spread = 3.0 * math.sqrt(u_bar / size)
        ucl = u_bar + spread
        lcl = max(0.0, u_bar - spread)
        flagged = rate > ucl or rate < lcl
        points.append(UChartPoint(unit_id, size, count, rate, ucl, lcl, flagged))
    return UChartResult(u_bar, unit_kind, tuple(points))


def u_chart(stats: IterationStats, defects: Sequence[DefectRecord]) -> UChartResult:
    """Defects-per-FP chart for one iteration, one point per unit."""
    known = {u.unit_id for u in stats.units}
    count_by_unit: dict[str, int] = {}
    for d in defects:
        if d.unit_id not in known:
            raise UnknownUnitError(
                f"defect {d.id!r} references unknown unit {d.unit_id!r}"
            )
        count_by_unit[d.unit_id] = count_by_unit.get(d.unit_id, 0) + 1
    sizes = [(u.unit_id, u.size_fp) for u in stats.units]
    return _u_chart_points(sizes, count_by_unit, "fp")


def u_chart_across_iterations(
    stats: Sequence[IterationStats], defects: Sequence[DefectRecord]
) -> UChartResult:
    """Defects-per-inspection-hour chart, one point per iteration."""
    known = {s.iteration_id for s in stats}
    count_by_iter: dict[str, int] = {}
    for d in defects:
        if d.iteration_id not in known:
            raise UnknownUnitError(
                f"defect {d.id!r} references unknown iteration {d.iteration_id!r}"
            )
        count_by_iter[d.iteration_id] = count_by_iter.get(d.iteration_id, 0) + 1
    sizes = [(s.iteration_id, s.inspection_effort_hours) for s in stats]
    return _u_chart_points(sizes, count_by_iter, "hour")


def defect_density(stats: IterationStats, defects: Sequence[DefectRecord]) -> float:
    """Defects per function point over the whole iteration."""
    total = stats.total_size
    if total <= 0:
        raise InvalidRecordError("total function points must be positive")
    return len(defects) / total


def inspection_efficiency(stats: IterationStats, defects: Sequence[DefectRecord]) -> float:
    """Defects found per inspection hour."""
    return len(defects) / stats.inspection_effort_hours


def group_defects(
    defects: Sequence[DefectRecord],
    error_id: str,
    label: str,
    defect_category: str,
    member_defect_ids: Iterable[str],
    iteration_id: str,
) -> SystematicError:
    """Group defects into a systematic error; members must share the iteration."""
    by_id = {d.id: d for d in defects}
    members = tuple(member_defect_ids)
    warnings: list[str] = []
    for mid in members:
        if mid not in by_id:
            raise UnknownDefectError(f"unknown defect {mid!r}")
        defect = by_id[mid]
        if defect.iteration_id != iteration_id:
            raise CrossIterationMemberError(
                f"defect {mid!r} belongs to iteration {defect.iteration_id!r}, "
                f"not {iteration_id!r}"
            )
        if defect.nature != defect_category:
            warnings.append(
                f"defect {mid!r} has nature {defect.nature!r}, "
                f"group is {defect_category!r}"
            )
    if not members:
        warnings.append("systematic error has no member defects")
    return SystematicError(
        id=error_id,
        label=label,
        defect_category=defect_category,
        member_defect_ids=members,
        iteration_id=iteration_id,
        warnings=tuple(warnings),
    )


def detail_histogram(
    defects: Sequence[DefectRecord],
    nature: str | None = None,
    min_count: int = 1,
) -> list[tuple[str, int]]:
    """Counts per detail tag, descending, hiding tags below min_count."""
    counts = Counter(
        d.detail_tag
        for d in defects
        if d.detail_tag and (nature is None or d.nature == nature)
    )
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(tag, count) for tag, count in ordered if count >= min_count]
