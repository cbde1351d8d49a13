"""Payload builders shared by the CLI and the HTTP API.

Both surfaces emit these structures verbatim, so for a given dataset the two
can never disagree on a number. Undefined measures serialize as JSON null
(never 0), letting clients render "n/a" distinctly.
"""

from __future__ import annotations

import csv
import io
import json

from .metrics import DatasetMetrics, jaccard
from .tuple_confusion import (
    TupleConfusionMatrix,
    build_tuple_confusion,
    enumerate_tuple_classes,
    export_tuple_confusion_csv,
)

DEFAULT_PAGE_SIZE = 50


def canonical_json(payload) -> str:
    """Key-sorted, compact JSON used for byte-level equality checks."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _round4(value: float | None) -> float | None:
    return None if value is None else round(value, 4)


def summary_payload(metrics: DatasetMetrics) -> dict:
    ds = metrics.dataset
    return {
        "name": ds.name,
        "counts": {
            "instances": len(ds.instances),
            "labels": len(ds.registry),
            "runs": len(ds.runs),
        },
        "registry": list(ds.registry.labels),
        "ground_truth": {"cardinality": metrics.truth_cardinality()},
        "summaries": [
            {
                "name": s.name,
                "cardinality": s.cardinality,
                "mean_f1": s.mean_f1,
                "mean_precision": s.mean_precision,
                "mean_recall": s.mean_recall,
                "mean_jaccard_vs_truth": s.mean_jaccard_vs_truth,
            }
            for s in metrics.summaries()
        ],
    }


def label_metrics_payload(
    metrics: DatasetMetrics, sort: str = "id", direction: str = "asc", run: str | None = None
) -> dict:
    """Per-label rows (always all labels, in the requested order) with counts
    and precision/recall/F1 for every run."""
    ds = metrics.dataset
    order = metrics.sorted_labels(sort, direction, run)
    gt_freq = metrics.gt_frequency()
    per_run_metrics = {r.name: metrics.label_metrics(r.name) for r in ds.runs}
    rows = []
    for label_id in order:
        cells = []
        for r in ds.runs:
            lm = per_run_metrics[r.name][label_id]
            cells.append(
                {
                    "run": r.name,
                    "tp": lm.counts.tp,
                    "fp": lm.counts.fp,
                    "fn": lm.counts.fn,
                    "tn": lm.counts.tn,
                    "precision": lm.precision,
                    "recall": lm.recall,
                    "f1": lm.f1,
                }
            )
        rows.append(
            {
                "id": label_id,
                "name": ds.registry.name(label_id),
                "gt_frequency": gt_freq[label_id],
                "metrics": cells,
            }
        )
    return {
        "sort": sort,
        "direction": direction,
        "run": run,
        "runs": [r.name for r in ds.runs],
        "labels": rows,
    }


def similarity_payload(metrics: DatasetMetrics, full_precision: bool = False) -> dict:
    sim = metrics.similarity()
    if full_precision:
        values = [list(row) for row in sim.values]
    else:
        values = [[_round4(v) for v in row] for row in sim.values]
    return {
        "parties": list(sim.parties),
        "values": values,
        "precision": "full" if full_precision else "4",
    }


def instances_payload(
    metrics: DatasetMetrics,
    label: int | None = None,
    page: int = 0,
    page_size: int = DEFAULT_PAGE_SIZE,
) -> dict:
    """One page of instance rows in canonical order, each with the truth set
    and every run's prediction plus its Jaccard against the truth."""
    ds = metrics.dataset
    if label is not None:
        ids = metrics.filtered_instances(label)  # raises ValueError on unknown label
    else:
        ids = list(ds.instance_ids)
    total = len(ids)
    selected = ids[page * page_size : (page + 1) * page_size]
    rows = []
    for iid in selected:
        inst = ds.instance(iid)
        run_cells = []
        for run in ds.runs:
            pred = run.prediction(iid)
            run_cells.append(
                {
                    "run": run.name,
                    "prediction": sorted(pred),
                    "jaccard": jaccard(inst.truth, pred),
                }
            )
        rows.append(
            {
                "id": iid,
                "document": {"kind": inst.document.kind, "mime": inst.document.mime},
                "truth": sorted(inst.truth),
                "runs": run_cells,
            }
        )
    return {
        "total": total,
        "page": page,
        "page_size": page_size,
        "instances": rows,
    }


def confusion_matrix_for(metrics: DatasetMetrics, run_name: str) -> TupleConfusionMatrix:
    """Tuple confusion matrix for one run over the dataset-wide class table
    (cached per dataset so all runs share identical dimensions)."""
    table = metrics._get(
        "tuple_table", lambda: enumerate_tuple_classes(metrics.dataset)
    )
    return metrics._get(
        ("confusion", run_name),
        lambda: build_tuple_confusion(metrics.dataset, metrics.dataset.run(run_name), table),
    )


def confusion_payload(metrics: DatasetMetrics, run_name: str) -> dict:
    m = confusion_matrix_for(metrics, run_name)
    return {
        "run": run_name,
        "classes": m.table.signatures(),
        "counts": [list(row) for row in m.counts],
        "row_sums": list(m.row_sums),
        "col_sums": list(m.col_sums),
        "diagonal": list(m.diagonal),
        "total": m.total,
    }


def confusion_csv(metrics: DatasetMetrics, run_name: str) -> str:
    return export_tuple_confusion_csv(confusion_matrix_for(metrics, run_name))


def metrics_document(
    metrics: DatasetMetrics, sort: str = "id", direction: str = "asc", run: str | None = None
) -> dict:
    """The one-stop report: summaries, per-label metrics, and the similarity
    matrix (full precision) in a single document."""
    return {
        "summary": summary_payload(metrics),
        "label_metrics": label_metrics_payload(metrics, sort, direction, run),
        "similarity": similarity_payload(metrics, full_precision=True),
    }


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value)


def metrics_document_csv(document: dict) -> str:
    """CSV rendering of :func:`metrics_document` with one section per part.

    Encodes exactly the same values as the JSON form: floats via their
    shortest round-tripping representation, undefined measures as empty cells.
    """
    buf = io.StringIO()
    writer = csv.writer(buf)
    summary = document["summary"]

    writer.writerow(["[dataset]"])
    writer.writerow(["name", "instances", "labels", "runs", "ground_truth_cardinality"])
    writer.writerow(
        [
            summary["name"],
            summary["counts"]["instances"],
            summary["counts"]["labels"],
            summary["counts"]["runs"],
            _cell(summary["ground_truth"]["cardinality"]),
        ]
    )
    writer.writerow([])

    writer.writerow(["[summaries]"])
    writer.writerow(
        ["run", "cardinality", "mean_f1", "mean_precision", "mean_recall", "mean_jaccard_vs_truth"]
    )
    for s in summary["summaries"]:
        writer.writerow(
            [
                s["name"],
                _cell(s["cardinality"]),
                _cell(s["mean_f1"]),
                _cell(s["mean_precision"]),
                _cell(s["mean_recall"]),
                _cell(s["mean_jaccard_vs_truth"]),
            ]
        )
    writer.writerow([])

    writer.writerow(["[label_metrics]"])
    writer.writerow(
        ["label_id", "label", "gt_frequency", "run", "tp", "fp", "fn", "tn", "precision", "recall", "f1"]
    )
    for row in document["label_metrics"]["labels"]:
        for cell in row["metrics"]:
            writer.writerow(
                [
                    row["id"],
                    row["name"],
                    row["gt_frequency"],
                    cell["run"],
                    cell["tp"],
                    cell["fp"],
                    cell["fn"],
                    cell["tn"],
                    _cell(cell["precision"]),
                    _cell(cell["recall"]),
                    _cell(cell["f1"]),
                ]
            )
    writer.writerow([])

    similarity = document["similarity"]
    writer.writerow(["[similarity]"])
    writer.writerow(["party", *similarity["parties"]])
    for party, row in zip(similarity["parties"], similarity["values"]):
        writer.writerow([party, *[_cell(v) for v in row]])
    return buf.getvalue()
