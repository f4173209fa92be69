"""Inspection-defect data model and SPC analytics."""

from dcaw.analytics.defects import (
    NATURE_VALUES,
    DefectRecord,
    IterationStats,
    SystematicError,
    UnitSize,
    read_defects_csv,
    read_effort_csv,
    read_units_csv,
    write_defects_csv,
)
from dcaw.analytics.charts import (
    ParetoEntry,
    ParetoResult,
    UChartPoint,
    UChartResult,
    defect_density,
    detail_histogram,
    group_defects,
    inspection_efficiency,
    pareto,
    u_chart,
    u_chart_across_iterations,
)

__all__ = [
    "NATURE_VALUES",
    "DefectRecord",
    "IterationStats",
    "ParetoEntry",
    "ParetoResult",
    "SystematicError",
    "UChartPoint",
    "UChartResult",
    "UnitSize",
    "defect_density",
    "detail_histogram",
    "group_defects",
    "inspection_efficiency",
    "pareto",
    "read_defects_csv",
    "read_effort_csv",
    "read_units_csv",
    "u_chart",
    "u_chart_across_iterations",
    "write_defects_csv",
]
