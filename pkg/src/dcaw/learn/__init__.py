"""Parameter learning: ML counting and EM over incomplete records."""

from dcaw.learn.records import (
    PROVENANCE_TAGS,
    RecordSet,
    read_records_csv,
    write_records_csv,
)
from dcaw.learn.em import (
    LearnConfig,
    LearnResult,
    em_learn,
    initialize_parameters,
    ml_counting,
)

__all__ = [
    "PROVENANCE_TAGS",
    "LearnConfig",
    "LearnResult",
    "RecordSet",
    "em_learn",
    "initialize_parameters",
    "ml_counting",
    "read_records_csv",
    "write_records_csv",
]
