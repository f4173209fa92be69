"""Authorable cause-effect domain model compiled to a Bayesian network."""

from dcaw.schema.model import (
    Category,
    CauseEffectModel,
    CitationRecord,
    Entity,
    model_from_document,
    model_to_document,
    parse_model,
    read_citations_csv,
    write_citations_csv,
)
from dcaw.schema.compile import CompiledModel, compile_model
from dcaw.schema.records import assignments_to_citation, records_to_assignments
from dcaw.schema.diagnose import (
    CategoryDiagnosis,
    CauseDiagnosis,
    DiagnosisView,
    diagnose,
)

__all__ = [
    "Category",
    "CategoryDiagnosis",
    "CauseDiagnosis",
    "CauseEffectModel",
    "CitationRecord",
    "CompiledModel",
    "DiagnosisView",
    "Entity",
    "assignments_to_citation",
    "compile_model",
    "diagnose",
    "model_from_document",
    "model_to_document",
    "parse_model",
    "read_citations_csv",
    "records_to_assignments",
    "write_citations_csv",
]
