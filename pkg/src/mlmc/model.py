"""Core domain model: label registry, instances, classifier runs, and dataset validation.

A dataset is immutable after load. All collections are stored in canonical
order (file order for instances, manifest order for runs, labels-file order
for the registry), which every downstream computation relies on for
bit-reproducible results.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Mapping

#: A label set is a frozenset of integer label IDs (indices into the registry).
LabelSet = frozenset

DOCUMENT_KINDS = ("text", "image", "audio", "none")

#: Above this many classifier runs the views become hard to tell apart.
MAX_RECOMMENDED_RUNS = 9

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class ReportEntry:
    severity: str
    code: str
    message: str

    def to_json(self) -> dict:
        return {"severity": self.severity, "code": self.code, "message": self.message}


class ValidationReport:
    """Ordered list of validation findings. Errors block use of a dataset, warnings do not."""

    def __init__(self, entries: Iterator[ReportEntry] | tuple = ()):
        self.entries: list[ReportEntry] = list(entries)

    def error(self, code: str, message: str) -> None:
        self.entries.append(ReportEntry(ERROR, code, message))

    def warning(self, code: str, message: str) -> None:
        self.entries.append(ReportEntry(WARNING, code, message))

    def extend(self, other: "ValidationReport") -> None:
        self.entries.extend(other.entries)

    @property
    def errors(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.severity == ERROR]

    @property
    def warnings(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.severity == WARNING]

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "errors": [e.to_json() for e in self.errors],
            "warnings": [e.to_json() for e in self.warnings],
        }

    def __repr__(self) -> str:
        return f"ValidationReport(errors={len(self.errors)}, warnings={len(self.warnings)})"


@dataclass(frozen=True)
class LabelRegistry:
    """The ordered universe of labels. A label's ID is its position in ``labels``."""

    labels: tuple[str, ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.labels)}

    def id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown label name: {name!r}") from None

    def name(self, label_id: int) -> str:
        return self.labels[label_id]

    def ids(self) -> range:
        return range(len(self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, name: str) -> bool:
        return name in self._index


@dataclass(frozen=True)
class DocumentRef:
    """The document an instance classifies: inline text, a media file path, or nothing.

    ``payload`` holds the text body for kind="text" and a path relative to the
    dataset root for kind="image"/"audio"; it is empty for kind="none".
    """

    kind: str = "none"
    payload: str = ""
    mime: str = ""


@dataclass(frozen=True)
class Instance:
    id: str
    document: DocumentRef
    truth: LabelSet


@dataclass(frozen=True)
class RunOrigin:
    """How a run's label sets came to be: given as hard labels, or thresholded from scores."""

    kind: str = "hard-labels"  # "hard-labels" | "thresholded"
    threshold: float | None = None
    gte: bool = False  # thresholded runs: True compares score >= t, False strict score > t

    def to_json(self) -> dict:
        if self.kind == "hard-labels":
            return {"kind": self.kind}
        return {"kind": self.kind, "threshold": self.threshold, "gte": self.gte}


HARD_LABELS = RunOrigin()


def thresholded(threshold: float, gte: bool = False) -> RunOrigin:
    return RunOrigin("thresholded", threshold, gte)


@dataclass(frozen=True, eq=False)
class ClassifierRun:
    """One classifier's complete predictions: instance ID -> label set."""

    name: str
    predictions: Mapping[str, LabelSet]
    origin: RunOrigin = HARD_LABELS

    def prediction(self, instance_id: str) -> LabelSet:
        return self.predictions.get(instance_id, frozenset())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassifierRun):
            return NotImplemented
        return (
            self.name == other.name
            and self.origin == other.origin
            and dict(self.predictions) == dict(other.predictions)
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable, validated collection of instances, ground truth, and classifier runs."""

    name: str
    registry: LabelRegistry
    instances: tuple[Instance, ...]
    runs: tuple[ClassifierRun, ...]
    root: Path | None = None
    document_kind: str = "none"

    @cached_property
    def instance_ids(self) -> tuple[str, ...]:
        return tuple(inst.id for inst in self.instances)

    @cached_property
    def _instance_index(self) -> dict[str, Instance]:
        return {inst.id: inst for inst in self.instances}

    @cached_property
    def _run_index(self) -> dict[str, ClassifierRun]:
        return {run.name: run for run in self.runs}

    def instance(self, instance_id: str) -> Instance:
        try:
            return self._instance_index[instance_id]
        except KeyError:
            raise KeyError(f"unknown instance id: {instance_id!r}") from None

    def run(self, name: str) -> ClassifierRun:
        try:
            return self._run_index[name]
        except KeyError:
            raise KeyError(f"unknown run name: {name!r}") from None

    def canonical_payload(self) -> dict:
        """JSON-ready view of the full dataset in canonical order (root excluded)."""
        return {
            "name": self.name,
            "document_kind": self.document_kind,
            "labels": list(self.registry.labels),
            "instances": [
                {
                    "id": inst.id,
                    "document": {
                        "kind": inst.document.kind,
                        "payload": inst.document.payload,
                        "mime": inst.document.mime,
                    },
                    "truth": sorted(inst.truth),
                }
                for inst in self.instances
            ],
            "runs": [
                {
                    "name": run.name,
                    "origin": run.origin.to_json(),
                    "predictions": {
                        iid: sorted(run.prediction(iid)) for iid in self.instance_ids
                    },
                }
                for run in self.runs
            ],
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(
            self.canonical_payload(), sort_keys=True, separators=(",", ":"), ensure_ascii=False
        ).encode("utf-8")

    @cached_property
    def content_hash(self) -> str:
        """Content-addressed dataset ID: identical logical content gives an identical hash."""
        return hashlib.sha256(self.canonical_bytes()).hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.canonical_bytes() == other.canonical_bytes()


def _path_is_within(root: Path, relative: str) -> bool:
    try:
        resolved = (root / relative).resolve()
        return resolved.is_relative_to(root.resolve())
    except (OSError, ValueError):
        return False


def validate(dataset: Dataset) -> ValidationReport:
    """Scan a structurally parsed dataset for every invariant violation.

    Returns all findings rather than stopping at the first; callers decide
    whether errors are fatal. Warnings (missing prediction entries, more than
    9 runs, missing media files) never block use.
    """
    report = ValidationReport()
    registry = dataset.registry
    label_range = len(registry)

    if label_range == 0:
        report.error("empty-registry", "label registry is empty")
    seen_names: dict[str, int] = {}
    for label_id, name in enumerate(registry.labels):
        if name != name.strip():
            report.error("untrimmed-label", f"label {name!r} has surrounding whitespace")
        if not name.strip():
            report.error("empty-label-name", f"label {label_id} is empty")
        elif name in seen_names:
            report.error(
                "duplicate-label",
                f"duplicate label name {name!r} (ids {seen_names[name]} and {label_id})",
            )
        else:
            seen_names[name] = label_id

    if not dataset.instances:
        report.error("no-instances", "dataset contains no instances")
    seen_ids: set[str] = set()
    for inst in dataset.instances:
        if inst.id in seen_ids:
            report.error("duplicate-instance-id", f"duplicate instance id {inst.id!r}")
        seen_ids.add(inst.id)
        bad = sorted(l for l in inst.truth if not (0 <= l < label_range))
        if bad:
            report.error(
                "unknown-label-id",
                f"instance {inst.id!r} ground truth references unknown label ids {bad}",
            )
        _validate_document(dataset, inst, report)

    if not dataset.runs:
        report.error("no-runs", "dataset contains no classifier runs")
    if len(dataset.runs) > MAX_RECOMMENDED_RUNS:
        report.warning(
            "too-many-runs",
            f"classifier count exceeds {MAX_RECOMMENDED_RUNS} ({len(dataset.runs)} runs); "
            "views may become hard to distinguish",
        )
    seen_runs: set[str] = set()
    instance_ids = set(dataset.instance_ids)
    for run in dataset.runs:
        if run.name in seen_runs:
            report.error("duplicate-run-name", f"duplicate run name {run.name!r}")
        seen_runs.add(run.name)
        for iid, labels in run.predictions.items():
            if iid not in instance_ids:
                report.error(
                    "unknown-instance-id",
                    f"run {run.name!r} predicts unknown instance id {iid!r}",
                )
                continue
            bad = sorted(l for l in labels if not (0 <= l < label_range))
            if bad:
                report.error(
                    "unknown-label-id",
                    f"run {run.name!r} prediction for {iid!r} references unknown label ids {bad}",
                )
        for iid in dataset.instance_ids:
            if iid not in run.predictions:
                report.warning(
                    "missing-prediction",
                    f"run {run.name!r} has no prediction for instance {iid!r}; treated as empty",
                )
    return report


def _validate_document(dataset: Dataset, inst: Instance, report: ValidationReport) -> None:
    doc = inst.document
    if doc.kind not in DOCUMENT_KINDS:
        report.error("unknown-document-kind", f"instance {inst.id!r}: unknown kind {doc.kind!r}")
        return
    if doc.kind == "none" and doc.payload:
        report.error(
            "unexpected-payload", f"instance {inst.id!r}: kind 'none' must have an empty payload"
        )
    if doc.kind in ("image", "audio"):
        if not doc.payload:
            report.error("missing-payload", f"instance {inst.id!r}: {doc.kind} path is empty")
        elif dataset.root is not None:
            if not _path_is_within(dataset.root, doc.payload):
                report.error(
                    "document-path-escape",
                    f"instance {inst.id!r}: path {doc.payload!r} escapes the dataset root",
                )
            elif not (dataset.root / doc.payload).is_file():
                report.warning(
                    "document-missing",
                    f"instance {inst.id!r}: file {doc.payload!r} not found under the dataset root",
                )
