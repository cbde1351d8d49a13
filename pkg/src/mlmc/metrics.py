"""Quantitative measures over a dataset: per-label outcomes, precision/recall/F1,
instance-level Jaccard similarity, per-classifier summaries, and the pairwise
similarity matrix.

Conventions shared by everything here:

* Precision and recall are ``None`` ("undefined") exactly when their
  denominators are zero; F1 is total (a label with no true positives and no
  errors scores 1.0, with errors 0.0).
* Jaccard of two empty sets is 1.0 (perfect agreement on absence).
* Every mean is an arithmetic mean accumulated left to right in canonical
  (registry / instance) order, so results are bit-reproducible.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

from .model import ClassifierRun, Dataset, LabelRegistry, LabelSet

SORT_KEYS = ("id", "gt-frequency", "f1", "total-f1")
DIRECTIONS = ("asc", "desc")


class Outcome(Enum):
    TP = "tp"
    FP = "fp"
    FN = "fn"
    TN = "tn"


@dataclass(frozen=True)
class OutcomeCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class LabelMetrics:
    label: int
    counts: OutcomeCounts
    precision: float | None
    recall: float | None
    f1: float


@dataclass(frozen=True)
class ClassifierSummary:
    name: str
    cardinality: float
    mean_f1: float
    mean_precision: float | None
    mean_recall: float | None
    mean_jaccard_vs_truth: float


@dataclass(frozen=True)
class SimilarityMatrix:
    """Instance-averaged Jaccard among ground truth (party 0) and every run."""

    parties: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class StackedTotal:
    label: int
    per_run: tuple[float, ...]
    total: float


def outcome_per_instance(
    truth: LabelSet, pred: LabelSet, registry: LabelRegistry
) -> dict[int, Outcome]:
    """Classify every registry label for one instance: present in both sets is a
    true positive, prediction-only a false positive, truth-only a false negative,
    neither a true negative."""
    outcomes = {}
    for label_id in registry.ids():
        in_truth = label_id in truth
        in_pred = label_id in pred
        if in_truth and in_pred:
            outcomes[label_id] = Outcome.TP
        elif in_pred:
            outcomes[label_id] = Outcome.FP
        elif in_truth:
            outcomes[label_id] = Outcome.FN
        else:
            outcomes[label_id] = Outcome.TN
    return outcomes


def accumulate(dataset: Dataset, run: ClassifierRun) -> list[OutcomeCounts]:
    """Sum per-instance outcomes over the whole dataset, one entry per label.

    For each label, tp+fp+fn+tn equals the instance count.
    """
    n_labels = len(dataset.registry)
    tp = [0] * n_labels
    fp = [0] * n_labels
    fn = [0] * n_labels
    for inst in dataset.instances:
        pred = run.prediction(inst.id)
        for l in inst.truth & pred:
            tp[l] += 1
        for l in pred - inst.truth:
            fp[l] += 1
        for l in inst.truth - pred:
            fn[l] += 1
    n = len(dataset.instances)
    return [
        OutcomeCounts(tp[l], fp[l], fn[l], n - tp[l] - fp[l] - fn[l]) for l in range(n_labels)
    ]


def precision(c: OutcomeCounts) -> float | None:
    if c.tp + c.fp == 0:
        return None
    return c.tp / (c.tp + c.fp)


def recall(c: OutcomeCounts) -> float | None:
    if c.tp + c.fn == 0:
        return None
    return c.tp / (c.tp + c.fn)


def f1(c: OutcomeCounts) -> float:
    """Harmonic mean of precision and recall, made total: a label that never
    occurs and is never predicted counts as 1.0 (it is all true negatives);
    zero true positives with any error counts as 0.0."""
    if c.tp == 0:
        if c.fp == 0 and c.fn == 0:
            return 1.0
        return 0.0
    p = c.tp / (c.tp + c.fp)
    r = c.tp / (c.tp + c.fn)
    return 2.0 * p * r / (p + r)


def jaccard(a: LabelSet, b: LabelSet) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def label_metrics(dataset: Dataset, run: ClassifierRun) -> list[LabelMetrics]:
    return [
        LabelMetrics(label_id, c, precision(c), recall(c), f1(c))
        for label_id, c in enumerate(accumulate(dataset, run))
    ]


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _mean_pairwise_jaccard(
    dataset: Dataset, sets_a: list[LabelSet], sets_b: list[LabelSet]
) -> float:
    total = 0.0
    for a, b in zip(sets_a, sets_b):
        total += jaccard(a, b)
    return total / len(dataset.instances)


def _truth_sets(dataset: Dataset) -> list[LabelSet]:
    return [inst.truth for inst in dataset.instances]


def _run_sets(dataset: Dataset, run: ClassifierRun) -> list[LabelSet]:
    return [run.prediction(iid) for iid in dataset.instance_ids]


def truth_cardinality(dataset: Dataset) -> float:
    """Average number of ground-truth labels per instance."""
    return sum(len(inst.truth) for inst in dataset.instances) / len(dataset.instances)


def classifier_summary(dataset: Dataset, run: ClassifierRun) -> ClassifierSummary:
    """Label-averaged F1/precision/recall, prediction cardinality, and the
    instance-averaged Jaccard against the ground truth.

    mean F1 averages over all labels (F1 is total); mean precision/recall
    average only over labels where the measure is defined and are ``None``
    when no label qualifies.
    """
    counts = accumulate(dataset, run)
    f1s = [f1(c) for c in counts]
    precisions = [p for c in counts if (p := precision(c)) is not None]
    recalls = [r for c in counts if (r := recall(c)) is not None]
    run_sets = _run_sets(dataset, run)
    return ClassifierSummary(
        name=run.name,
        cardinality=sum(len(s) for s in run_sets) / len(dataset.instances),
        mean_f1=_mean(f1s),
        mean_precision=_mean(precisions) if precisions else None,
        mean_recall=_mean(recalls) if recalls else None,
        mean_jaccard_vs_truth=_mean_pairwise_jaccard(dataset, _truth_sets(dataset), run_sets),
    )


GROUND_TRUTH_PARTY = "ground-truth"


def similarity_matrix(dataset: Dataset) -> SimilarityMatrix:
    """Pairwise instance-averaged Jaccard among ground truth and all runs.

    Row/column 0 is the ground truth. The matrix is exactly symmetric (each
    pair is computed once) and the diagonal is exactly 1.0.
    """
    parties = [GROUND_TRUTH_PARTY] + [run.name for run in dataset.runs]
    party_sets = [_truth_sets(dataset)] + [_run_sets(dataset, run) for run in dataset.runs]
    size = len(party_sets)
    values = [[1.0] * size for _ in range(size)]
    for p in range(size):
        for q in range(p + 1, size):
            v = _mean_pairwise_jaccard(dataset, party_sets[p], party_sets[q])
            values[p][q] = v
            values[q][p] = v
    return SimilarityMatrix(tuple(parties), tuple(tuple(row) for row in values))


def gt_label_frequency(dataset: Dataset) -> list[int]:
    """Per label: how many ground-truth instances contain it."""
    freq = [0] * len(dataset.registry)
    for inst in dataset.instances:
        for l in inst.truth:
            freq[l] += 1
    return freq


def sort_labels(
    dataset: Dataset, key: str, direction: str = "asc", run: str | None = None
) -> list[int]:
    """Order label IDs by one of: id, gt-frequency, f1 (one run; pass its name),
    total-f1 (summed across runs). Ties always break by label ID ascending."""
    if key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r}; expected one of {', '.join(SORT_KEYS)}")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}; expected 'asc' or 'desc'")
    ids = list(dataset.registry.ids())
    if key == "id":
        return ids if direction == "asc" else ids[::-1]
    if key == "gt-frequency":
        values = [float(v) for v in gt_label_frequency(dataset)]
    elif key == "f1":
        if run is None:
            raise ValueError("sort key 'f1' requires a run name")
        values = [f1(c) for c in accumulate(dataset, dataset.run(run))]
    else:  # total-f1
        values = [0.0] * len(ids)
        for r in dataset.runs:
            for l, c in enumerate(accumulate(dataset, r)):
                values[l] += f1(c)
    sign = 1.0 if direction == "asc" else -1.0
    return sorted(ids, key=lambda l: (sign * values[l], l))


def stacked_totals(dataset: Dataset) -> list[StackedTotal]:
    """Per label, the per-run F1 contributions and their sum, sorted by total
    descending (ties by label ID)."""
    per_run = [[f1(c) for c in accumulate(dataset, run)] for run in dataset.runs]
    rows = []
    for l in dataset.registry.ids():
        contributions = tuple(per_run[r][l] for r in range(len(dataset.runs)))
        rows.append(StackedTotal(l, contributions, sum(contributions)))
    rows.sort(key=lambda row: (-row.total, row.label))
    return rows


def filter_instances(dataset: Dataset, label_id: int) -> list[str]:
    """IDs of instances whose truth or any run's prediction contains the label,
    in original order."""
    if not 0 <= label_id < len(dataset.registry):
        raise ValueError(f"unknown label id {label_id}")
    kept = []
    for inst in dataset.instances:
        if label_id in inst.truth or any(
            label_id in run.prediction(inst.id) for run in dataset.runs
        ):
            kept.append(inst.id)
    return kept


class DatasetMetrics:
    """Read-through cache over the pure metric functions for one immutable dataset.

    Values are computed at most once per (operation, parameters) key; insertion
    is serialized, reads are lock-free after publication.
    """

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self._cache: dict = {}
        # reentrant: compute functions may fetch other cached values
        self._lock = threading.RLock()

    def _get(self, key, compute):
        if key in self._cache:
            return self._cache[key]
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    def counts(self, run_name: str) -> list[OutcomeCounts]:
        return self._get(
            ("counts", run_name), lambda: accumulate(self.dataset, self.dataset.run(run_name))
        )

    def label_metrics(self, run_name: str) -> list[LabelMetrics]:
        def compute():
            return [
                LabelMetrics(l, c, precision(c), recall(c), f1(c))
                for l, c in enumerate(self.counts(run_name))
            ]

        return self._get(("label_metrics", run_name), compute)

    def summary(self, run_name: str) -> ClassifierSummary:
        return self._get(
            ("summary", run_name),
            lambda: classifier_summary(self.dataset, self.dataset.run(run_name)),
        )

    def summaries(self) -> list[ClassifierSummary]:
        return [self.summary(run.name) for run in self.dataset.runs]

    def similarity(self) -> SimilarityMatrix:
        return self._get("similarity", lambda: similarity_matrix(self.dataset))

    def gt_frequency(self) -> list[int]:
        return self._get("gt_frequency", lambda: gt_label_frequency(self.dataset))

    def truth_cardinality(self) -> float:
        return self._get("truth_cardinality", lambda: truth_cardinality(self.dataset))

    def sorted_labels(self, key: str, direction: str = "asc", run: str | None = None) -> list[int]:
        return self._get(
            ("sort", key, direction, run),
            lambda: sort_labels(self.dataset, key, direction, run),
        )

    def stacked_totals(self) -> list[StackedTotal]:
        return self._get("stacked_totals", lambda: stacked_totals(self.dataset))

    def filtered_instances(self, label_id: int) -> list[str]:
        return self._get(
            ("filter", label_id), lambda: filter_instances(self.dataset, label_id)
        )
