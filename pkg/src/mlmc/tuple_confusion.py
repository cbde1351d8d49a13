"""Tuple-class confusion matrices.

Multi-class confusion matrices need one class per row and column, so each
distinct label set occurring anywhere in the data (ground truth or any run's
predictions) is treated as one "tuple class". Only occurring sets become
classes; the full power set is never enumerated. All runs of a dataset share
one class table so their matrices have identical dimensions.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property

from .model import ClassifierRun, Dataset, LabelRegistry, LabelSet

EMPTY_CLASS_SIGN = "∅"


@dataclass(frozen=True)
class TupleClassTable:
    """Distinct occurring label sets in canonical order: cardinality ascending,
    then lexicographic by sorted label IDs."""

    classes: tuple[LabelSet, ...]
    registry: LabelRegistry

    @cached_property
    def _index(self) -> dict[LabelSet, int]:
        return {s: i for i, s in enumerate(self.classes)}

    def index(self, labels: LabelSet) -> int:
        try:
            return self._index[frozenset(labels)]
        except KeyError:
            raise KeyError(f"label set {sorted(labels)} is not an occurring class") from None

    def signature(self, class_index: int) -> str:
        members = sorted(self.classes[class_index])
        if not members:
            return EMPTY_CLASS_SIGN
        return "|".join(self.registry.name(l) for l in members)

    def signatures(self) -> list[str]:
        return [self.signature(i) for i in range(len(self.classes))]

    def __len__(self) -> int:
        return len(self.classes)


def canonical_class_order(sets) -> list[LabelSet]:
    return sorted(sets, key=lambda s: (len(s), tuple(sorted(s))))


def enumerate_tuple_classes(dataset: Dataset) -> TupleClassTable:
    occurring = {inst.truth for inst in dataset.instances}
    for run in dataset.runs:
        for iid in dataset.instance_ids:
            occurring.add(run.prediction(iid))
    return TupleClassTable(tuple(canonical_class_order(occurring)), dataset.registry)


@dataclass(frozen=True)
class TupleConfusionMatrix:
    """counts[r][c] = number of instances whose truth is class r and whose
    prediction is class c. Margins and the diagonal are precomputed."""

    table: TupleClassTable
    run_name: str
    counts: tuple[tuple[int, ...], ...]
    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]
    diagonal: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.row_sums)


def build_tuple_confusion(
    dataset: Dataset, run: ClassifierRun, table: TupleClassTable | None = None
) -> TupleConfusionMatrix:
    if table is None:
        table = enumerate_tuple_classes(dataset)
    size = len(table)
    counts = [[0] * size for _ in range(size)]
    for inst in dataset.instances:
        r = table.index(inst.truth)
        c = table.index(run.prediction(inst.id))
        counts[r][c] += 1
    row_sums = tuple(sum(row) for row in counts)
    col_sums = tuple(sum(counts[r][c] for r in range(size)) for c in range(size))
    diagonal = tuple(counts[i][i] for i in range(size))
    return TupleConfusionMatrix(
        table=table,
        run_name=run.name,
        counts=tuple(tuple(row) for row in counts),
        row_sums=row_sums,
        col_sums=col_sums,
        diagonal=diagonal,
    )


def export_tuple_confusion_csv(matrix: TupleConfusionMatrix) -> str:
    """CSV rendering: rows are truth classes, columns predicted classes, with
    the diagonal extracted to an extra column and row/column margins.

    Class signatures join label names with "|" (empty set renders as "∅").
    RFC 4180 quoting and CRLF line endings.
    """
    buf = io.StringIO()
    writer = csv.writer(buf)
    sigs = matrix.table.signatures()
    writer.writerow(["class", *sigs, "diagonal", "row_sum"])
    for r, sig in enumerate(sigs):
        writer.writerow([sig, *matrix.counts[r], matrix.diagonal[r], matrix.row_sums[r]])
    writer.writerow(["col_sum", *matrix.col_sums, sum(matrix.diagonal), matrix.total])
    return buf.getvalue()


@dataclass(frozen=True)
class ParsedConfusionCsv:
    signatures: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]
    diagonal: tuple[int, ...]
    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]
    diagonal_total: int
    total: int


def parse_tuple_confusion_csv(text: str) -> ParsedConfusionCsv:
    """Inverse of :func:`export_tuple_confusion_csv` (layout is positional, so
    label names that collide with the margin headings cannot confuse it)."""
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 3:
        raise ValueError("confusion CSV must have a header, at least one class row, and margins")
    size = len(rows) - 2
    header = rows[0]
    if len(header) != size + 3:
        raise ValueError(f"header width {len(header)} does not match {size} classes")
    signatures = tuple(header[1 : 1 + size])
    counts = []
    diagonal = []
    row_sums = []
    for r in range(size):
        row = rows[1 + r]
        if len(row) != size + 3 or row[0] != signatures[r]:
            raise ValueError(f"malformed class row {r}")
        counts.append(tuple(int(v) for v in row[1 : 1 + size]))
        diagonal.append(int(row[1 + size]))
        row_sums.append(int(row[2 + size]))
    margin = rows[-1]
    if margin[0] != "col_sum":
        raise ValueError("missing col_sum margin row")
    col_sums = tuple(int(v) for v in margin[1 : 1 + size])
    return ParsedConfusionCsv(
        signatures=signatures,
        counts=tuple(counts),
        diagonal=tuple(diagonal),
        row_sums=tuple(row_sums),
        col_sums=col_sums,
        diagonal_total=int(margin[1 + size]),
        total=int(margin[2 + size]),
    )
