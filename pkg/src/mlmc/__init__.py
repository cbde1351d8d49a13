"""Evaluation toolkit for comparing multi-label classifier runs.

Core pieces: dataset model and validation (:mod:`mlmc.model`), directory
ingest and thresholding (:mod:`mlmc.ingest`), per-label and per-run metrics
(:mod:`mlmc.metrics`), label-set confusion matrices
(:mod:`mlmc.tuple_confusion`), shared report payloads (:mod:`mlmc.reports`),
and the HTTP service (:mod:`mlmc.api`).
"""

from .ingest import IngestError, LoadResult, ScoredRun, apply_threshold, parse_dataset
from .metrics import (
    ClassifierSummary,
    DatasetMetrics,
    LabelMetrics,
    OutcomeCounts,
    SimilarityMatrix,
    classifier_summary,
    f1,
    jaccard,
    label_metrics,
    precision,
    recall,
    similarity_matrix,
)
from .model import (
    ClassifierRun,
    Dataset,
    DocumentRef,
    Instance,
    LabelRegistry,
    ValidationReport,
    validate,
)
from .tuple_confusion import (
    TupleClassTable,
    TupleConfusionMatrix,
    build_tuple_confusion,
    enumerate_tuple_classes,
    export_tuple_confusion_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ClassifierRun",
    "ClassifierSummary",
    "Dataset",
    "DatasetMetrics",
    "DocumentRef",
    "IngestError",
    "Instance",
    "LabelMetrics",
    "LabelRegistry",
    "LoadResult",
    "OutcomeCounts",
    "ScoredRun",
    "SimilarityMatrix",
    "TupleClassTable",
    "TupleConfusionMatrix",
    "ValidationReport",
    "apply_threshold",
    "build_tuple_confusion",
    "classifier_summary",
    "enumerate_tuple_classes",
    "export_tuple_confusion_csv",
    "f1",
    "jaccard",
    "label_metrics",
    "parse_dataset",
    "precision",
    "recall",
    "similarity_matrix",
    "validate",
]
