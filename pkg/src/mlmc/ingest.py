"""Dataset directory parsing, score thresholding, and serialization.

Directory layout (all files UTF-8, LF line endings):

* ``manifest.json`` — ``{"name", "document_kind", "ground_truth", "predictions":
  [{"name", "file", "scored"}]}``
* ``labels.txt`` — one label name per line; the 0-based line number is the label ID.
* ground truth / hard prediction files — ``instance_id<TAB>doc_payload<TAB>label;label;...``
  (third field empty for an empty set; text payloads escape tab/newline/backslash
  as ``\\t``/``\\n``/``\\\\``). Lines starting with ``#`` are comments; a
  ``# threshold=<t> mode=<gt|gte>`` header records how a hard file was derived.
* scored prediction files — ``instance_id<TAB>label=score;label=score;...``
"""

from __future__ import annotations

import json
import mimetypes
import re
from dataclasses import dataclass
from pathlib import Path, PurePosixPath
from typing import NoReturn

from .model import (
    DOCUMENT_KINDS,
    HARD_LABELS,
    ClassifierRun,
    Dataset,
    DocumentRef,
    Instance,
    LabelRegistry,
    LabelSet,
    RunOrigin,
    ValidationReport,
    thresholded,
    validate,
)

LABELS_FILE = "labels.txt"
MANIFEST_FILE = "manifest.json"

#: Characters that the line-oriented formats cannot represent in label names.
_FORBIDDEN_IN_LABELS = ("\t", "\n", ";", "=")

_ORIGIN_COMMENT = re.compile(r"#\s*threshold=(\S+)\s+mode=(gt|gte)\s*$")


class IngestError(Exception):
    """A dataset could not be parsed or failed validation with errors."""

    def __init__(self, report: ValidationReport):
        self.report = report
        first = report.errors[0].message if report.errors else "ingest failed"
        super().__init__(first)


def _fail(code: str, message: str) -> NoReturn:
    report = ValidationReport()
    report.error(code, message)
    raise IngestError(report)


@dataclass(frozen=True)
class ScoredRun:
    """Score-based predictions in [0, 1]; labels absent from an instance's map score 0."""

    name: str
    scores: dict  # instance id -> {label id -> score}


@dataclass(frozen=True)
class LoadResult:
    dataset: Dataset
    report: ValidationReport


def apply_threshold(run: ScoredRun, threshold: float, *, gte: bool = False) -> ClassifierRun:
    """Turn scores into hard labels: keep a label iff its score exceeds the threshold.

    The comparison is strict (``score > t``) by default; pass ``gte=True`` for
    ``score >= t``. Scores outside [0, 1] (including NaN) are rejected outright,
    never clamped.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be within [0, 1], got {threshold!r}")
    predictions: dict[str, LabelSet] = {}
    for iid, label_scores in run.scores.items():
        members = set()
        for label_id, score in label_scores.items():
            if not 0.0 <= score <= 1.0:
                raise ValueError(
                    f"score {score!r} out of range [0, 1] for instance {iid!r}, label {label_id}"
                )
            if score >= threshold if gte else score > threshold:
                members.add(label_id)
        predictions[iid] = frozenset(members)
    return ClassifierRun(run.name, predictions, origin=thresholded(threshold, gte))


def parse_dataset(root: Path | str, *, threshold: float = 0.5, gte: bool = False) -> LoadResult:
    """Parse and validate a dataset directory.

    Scored prediction files are thresholded at load time with the given
    threshold and comparison mode. Hard errors (malformed syntax, unknown
    labels, duplicate IDs, failed invariants) raise :class:`IngestError`;
    recoverable findings (missing prediction entries, more than 9 runs) land
    in the returned report as warnings.
    """
    root = Path(root)
    if not root.is_dir():
        _fail("missing-root", f"dataset root {str(root)!r} is not a directory")
    manifest = _read_manifest(root)
    registry = _read_labels(root / LABELS_FILE)

    kind = manifest["document_kind"]
    gt_name = manifest["ground_truth"]
    gt_rows, _ = _parse_hard_lines(_read_file(root, gt_name), registry, gt_name)
    instances = _build_instances(gt_rows, kind, gt_name)
    instance_ids = [inst.id for inst in instances]

    report = ValidationReport()
    runs = []
    for entry in manifest["predictions"]:
        file_name = entry["file"]
        text = _read_file(root, file_name)
        if entry["scored"]:
            scored = _parse_scored_lines(text, registry, file_name, entry["name"])
            run = apply_threshold(scored, threshold, gte=gte)
        else:
            rows, origin = _parse_hard_lines(text, registry, file_name)
            run = ClassifierRun(
                entry["name"], {iid: labels for iid, _, labels in rows}, origin or HARD_LABELS
            )
        runs.append(_materialize_missing(run, instance_ids, report))

    dataset = Dataset(
        name=manifest["name"],
        registry=registry,
        instances=tuple(instances),
        runs=tuple(runs),
        root=root,
        document_kind=kind,
    )
    report.extend(validate(dataset))
    if not report.ok:
        raise IngestError(report)
    return LoadResult(dataset, report)


def load_scored_run(root: Path | str, run_name: str) -> ScoredRun:
    """Load one scored prediction file by run name, keeping the raw scores."""
    root = Path(root)
    manifest = _read_manifest(root)
    registry = _read_labels(root / LABELS_FILE)
    for entry in manifest["predictions"]:
        if entry["name"] == run_name:
            if not entry["scored"]:
                _fail("not-scored", f"run {run_name!r} is not score-based")
            return _parse_scored_lines(
                _read_file(root, entry["file"]), registry, entry["file"], run_name
            )
    _fail("unknown-run", f"no prediction entry named {run_name!r} in {MANIFEST_FILE}")


# --- readers -------------------------------------------------------------


def _read_file(root: Path, relative: str) -> str:
    path = root / relative
    if not path.is_file():
        _fail("missing-file", f"file {relative!r} not found under the dataset root")
    return path.read_text(encoding="utf-8")


def _checked_relative(value: str, context: str) -> str:
    p = PurePosixPath(value)
    if p.is_absolute() or ".." in p.parts or value == "":
        _fail("bad-path", f"{context}: path {value!r} must be relative and stay inside the root")
    return value


def _read_manifest(root: Path) -> dict:
    path = root / MANIFEST_FILE
    if not path.is_file():
        _fail("missing-file", f"{MANIFEST_FILE} not found under the dataset root")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        _fail("manifest-syntax", f"{MANIFEST_FILE}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict):
        _fail("manifest-syntax", f"{MANIFEST_FILE}: top level must be an object")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        _fail("manifest-field", f"{MANIFEST_FILE}: 'name' must be a non-empty string")
    kind = raw.get("document_kind")
    if kind not in DOCUMENT_KINDS:
        _fail(
            "manifest-field",
            f"{MANIFEST_FILE}: 'document_kind' must be one of {', '.join(DOCUMENT_KINDS)}",
        )
    gt = raw.get("ground_truth")
    if not isinstance(gt, str):
        _fail("manifest-field", f"{MANIFEST_FILE}: 'ground_truth' must be a path string")
    _checked_relative(gt, f"{MANIFEST_FILE} ground_truth")
    preds = raw.get("predictions")
    if not isinstance(preds, list) or not preds:
        _fail("manifest-field", f"{MANIFEST_FILE}: 'predictions' must be a non-empty list")
    seen = set()
    entries = []
    for i, entry in enumerate(preds):
        if not isinstance(entry, dict):
            _fail("manifest-field", f"{MANIFEST_FILE}: predictions[{i}] must be an object")
        pname, pfile, scored = entry.get("name"), entry.get("file"), entry.get("scored")
        if not isinstance(pname, str) or not pname:
            _fail("manifest-field", f"{MANIFEST_FILE}: predictions[{i}].name must be a non-empty string")
        if not isinstance(pfile, str):
            _fail("manifest-field", f"{MANIFEST_FILE}: predictions[{i}].file must be a path string")
        if not isinstance(scored, bool):
            _fail("manifest-field", f"{MANIFEST_FILE}: predictions[{i}].scored must be a boolean")
        _checked_relative(pfile, f"{MANIFEST_FILE} predictions[{i}].file")
        if pname in seen:
            _fail("duplicate-run-name", f"{MANIFEST_FILE}: duplicate prediction name {pname!r}")
        seen.add(pname)
        entries.append({"name": pname, "file": pfile, "scored": scored})
    return {"name": name, "document_kind": kind, "ground_truth": gt, "predictions": entries}


def _read_labels(path: Path) -> LabelRegistry:
    if not path.is_file():
        _fail("missing-file", f"{LABELS_FILE} not found under the dataset root")
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        _fail("empty-labels", f"{LABELS_FILE} is empty")
    names: list[str] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        name = line.strip()
        if not name:
            _fail("empty-label-name", f"{LABELS_FILE}: line {lineno}: empty label name")
        if name in seen:
            _fail(
                "duplicate-label",
                f"{LABELS_FILE}: line {lineno}: duplicate label {name!r} (first at line {seen[name]})",
            )
        seen[name] = lineno
        names.append(name)
    return LabelRegistry(tuple(names))


# --- line parsers ---------------------------------------------------------


def _split_lines(text: str) -> list[tuple[int, str]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return list(enumerate(lines, start=1))


def _parse_label_list(
    raw: str, registry: LabelRegistry, source: str, lineno: int, col_offset: int
) -> LabelSet:
    if raw == "":
        return frozenset()
    members = set()
    pos = col_offset
    for token in raw.split(";"):
        name = token.strip()
        if not name:
            _fail("syntax", f"{source}: line {lineno}, column {pos + 1}: empty label entry")
        if name not in registry:
            _fail(
                "unknown-label",
                f"{source}: line {lineno}, column {pos + 1}: unknown label name {name!r}",
            )
        members.add(registry.id(name))
        pos += len(token) + 1
    return frozenset(members)


def _parse_hard_lines(
    text: str, registry: LabelRegistry, source: str
) -> tuple[list[tuple[str, str, LabelSet]], RunOrigin | None]:
    """Parse a ground-truth or hard prediction file.

    Returns (rows, origin) where each row is (instance_id, raw_payload_field,
    label set) and origin is restored from a threshold comment header when
    one is present.
    """
    rows: list[tuple[str, str, LabelSet]] = []
    origin: RunOrigin | None = None
    seen: set[str] = set()
    for lineno, line in _split_lines(text):
        if line.startswith("#"):
            match = _ORIGIN_COMMENT.match(line)
            if match:
                origin = thresholded(float(match.group(1)), match.group(2) == "gte")
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            _fail(
                "syntax",
                f"{source}: line {lineno}, column 1: expected 3 tab-separated fields, got {len(fields)}",
            )
        iid, payload_raw, labels_raw = fields
        if not iid:
            _fail("syntax", f"{source}: line {lineno}, column 1: empty instance id")
        if iid in seen:
            _fail("duplicate-instance-id", f"{source}: line {lineno}: duplicate instance id {iid!r}")
        seen.add(iid)
        labels = _parse_label_list(
            labels_raw, registry, source, lineno, len(iid) + len(payload_raw) + 2
        )
        rows.append((iid, payload_raw, labels))
    return rows, origin


def _parse_scored_lines(
    text: str, registry: LabelRegistry, source: str, run_name: str
) -> ScoredRun:
    scores: dict[str, dict[int, float]] = {}
    for lineno, line in _split_lines(text):
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            _fail(
                "syntax",
                f"{source}: line {lineno}, column 1: expected 2 tab-separated fields, got {len(fields)}",
            )
        iid, scores_raw = fields
        if not iid:
            _fail("syntax", f"{source}: line {lineno}, column 1: empty instance id")
        if iid in scores:
            _fail("duplicate-instance-id", f"{source}: line {lineno}: duplicate instance id {iid!r}")
        entry: dict[int, float] = {}
        pos = len(iid) + 1
        if scores_raw:
            for token in scores_raw.split(";"):
                col = pos + 1
                name, sep, score_str = token.rpartition("=")
                name = name.strip()
                if not sep or not name:
                    _fail(
                        "syntax",
                        f"{source}: line {lineno}, column {col}: expected label=score, got {token!r}",
                    )
                if name not in registry:
                    _fail(
                        "unknown-label",
                        f"{source}: line {lineno}, column {col}: unknown label name {name!r}",
                    )
                try:
                    score = float(score_str)
                except ValueError:
                    _fail(
                        "syntax",
                        f"{source}: line {lineno}, column {col}: malformed score {score_str!r}",
                    )
                if not 0.0 <= score <= 1.0:
                    _fail(
                        "score-range",
                        f"{source}: line {lineno}, column {col}: score {score_str} out of range "
                        f"[0, 1] for instance {iid!r}, label {name!r}",
                    )
                label_id = registry.id(name)
                if label_id in entry:
                    _fail(
                        "duplicate-score",
                        f"{source}: line {lineno}, column {col}: duplicate score for label {name!r}",
                    )
                entry[label_id] = score
                pos += len(token) + 1
        scores[iid] = entry
    return ScoredRun(run_name, scores)


def _build_instances(
    rows: list[tuple[str, str, LabelSet]], kind: str, source: str
) -> list[Instance]:
    instances = []
    for iid, payload_raw, labels in rows:
        if kind == "text":
            payload = unescape_payload(payload_raw, source)
            mime = "text/plain"
        elif kind in ("image", "audio"):
            payload = payload_raw
            mime = (mimetypes.guess_type(payload)[0] or "") if payload else ""
        else:  # none
            if payload_raw:
                _fail(
                    "unexpected-payload",
                    f"{source}: instance {iid!r}: document kind 'none' must have an empty payload field",
                )
            payload, mime = "", ""
        instances.append(Instance(iid, DocumentRef(kind, payload, mime), labels))
    return instances


def _materialize_missing(
    run: ClassifierRun, instance_ids: list[str], report: ValidationReport
) -> ClassifierRun:
    predictions = dict(run.predictions)
    for iid in instance_ids:
        if iid not in predictions:
            report.warning(
                "missing-prediction",
                f"run {run.name!r} has no prediction for instance {iid!r}; treated as empty",
            )
            predictions[iid] = frozenset()
    return ClassifierRun(run.name, predictions, run.origin)


# --- payload escaping -----------------------------------------------------


def escape_payload(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_payload(raw: str, source: str = "<payload>") -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch == "\\":
            if i + 1 >= len(raw):
                _fail("syntax", f"{source}: dangling backslash in text payload")
            nxt = raw[i + 1]
            if nxt == "t":
                out.append("\t")
            elif nxt == "n":
                out.append("\n")
            elif nxt == "\\":
                out.append("\\")
            else:
                _fail("syntax", f"{source}: invalid escape '\\{nxt}' in text payload")
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


# --- serialization ---------------------------------------------------------


def format_hard_run(run: ClassifierRun, dataset: Dataset) -> str:
    """Render a run as a hard prediction file in canonical instance order.

    Thresholded runs get a comment header recording the threshold and
    comparison mode, so re-ingesting the file restores the origin.
    """
    lines = []
    if run.origin.kind == "thresholded":
        mode = "gte" if run.origin.gte else "gt"
        lines.append(f"# threshold={run.origin.threshold!r} mode={mode}")
    registry = dataset.registry
    for iid in dataset.instance_ids:
        labels = ";".join(registry.name(l) for l in sorted(run.prediction(iid)))
        lines.append(f"{iid}\t\t{labels}")
    return "\n".join(lines) + "\n"


def _format_ground_truth(dataset: Dataset) -> str:
    lines = []
    registry = dataset.registry
    for inst in dataset.instances:
        if inst.document.kind == "text":
            payload = escape_payload(inst.document.payload)
        else:
            payload = inst.document.payload
        labels = ";".join(registry.name(l) for l in sorted(inst.truth))
        lines.append(f"{inst.id}\t{payload}\t{labels}")
    return "\n".join(lines) + "\n"


def _check_writable(dataset: Dataset) -> None:
    for name in dataset.registry.labels:
        for ch in _FORBIDDEN_IN_LABELS:
            if ch in name:
                raise ValueError(
                    f"label {name!r} contains {ch!r}, which the line format cannot represent"
                )
    for iid in dataset.instance_ids:
        if "\t" in iid or "\n" in iid or iid.startswith("#"):
            raise ValueError(f"instance id {iid!r} cannot be represented in the line format")


def write_dataset(dataset: Dataset, out_dir: Path | str) -> None:
    """Serialize a dataset back into the directory layout.

    Re-parsing the output yields a dataset with identical canonical bytes
    (media files are referenced by path, not copied).
    """
    _check_writable(dataset)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    run_files = [f"run_{i:03d}.tsv" for i in range(len(dataset.runs))]
    manifest = {
        "name": dataset.name,
        "document_kind": dataset.document_kind,
        "ground_truth": "ground_truth.tsv",
        "predictions": [
            {"name": run.name, "file": file_name, "scored": False}
            for run, file_name in zip(dataset.runs, run_files)
        ],
    }
    (out / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8", newline="\n"
    )
    (out / LABELS_FILE).write_text(
        "\n".join(dataset.registry.labels) + "\n", encoding="utf-8", newline="\n"
    )
    (out / "ground_truth.tsv").write_text(
        _format_ground_truth(dataset), encoding="utf-8", newline="\n"
    )
    for run, file_name in zip(dataset.runs, run_files):
        (out / file_name).write_text(
            format_hard_run(run, dataset), encoding="utf-8", newline="\n"
        )
