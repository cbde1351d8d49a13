import random
import re
from pathlib import Path

import pytest

from mlmc.model import ClassifierRun, Dataset, DocumentRef, Instance, LabelRegistry

_CRITERION = re.compile(r"::test_(P\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL/SKIP line per acceptance criterion (tests named test_P<n>_*)."""
    results = {}
    for status, word in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL"), ("skipped", "SKIP")):
        for report in terminalreporter.stats.get(status, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if match:
                results[(match.group(1), match.group(2))] = word
    if results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for (criterion, slug), word in sorted(results.items()):
            terminalreporter.write_line(f"{criterion} {slug.replace('_', '-')}: {word}")


def build_dataset(
    labels,
    truth,
    runs,
    name="demo",
    document_kind="none",
    root=None,
    payloads=None,
):
    """Assemble a Dataset from primitives.

    truth: ordered {instance_id: iterable of label ids}
    runs: ordered {run_name: {instance_id: iterable of label ids}}
    payloads: optional {instance_id: payload string} for non-none kinds
    """
    payloads = payloads or {}
    instances = []
    for iid, members in truth.items():
        payload = payloads.get(iid, "")
        if document_kind == "text" and iid not in payloads:
            payload = f"text of {iid}"
        mime = "text/plain" if document_kind == "text" else ""
        doc = DocumentRef(kind=document_kind, payload=payload, mime=mime)
        instances.append(Instance(id=iid, document=doc, truth=frozenset(members)))
    run_objs = tuple(
        ClassifierRun(rname, {iid: frozenset(m) for iid, m in preds.items()})
        for rname, preds in runs.items()
    )
    return Dataset(
        name=name,
        registry=LabelRegistry(tuple(labels)),
        instances=tuple(instances),
        runs=run_objs,
        root=Path(root) if root else None,
        document_kind=document_kind,
    )


def dataset_rows(dataset):
    """(instance_id, truth_set) rows in canonical order, for the oracle."""
    return [(inst.id, inst.truth) for inst in dataset.instances]


def run_predictions(dataset, run_name):
    run = dataset.run(run_name)
    return {iid: run.prediction(iid) for iid in dataset.instance_ids}


def random_dataset(rng: random.Random, max_instances=10, max_labels=5, max_runs=4):
    """Small random dataset covering the awkward corners: empty truth sets,
    empty predictions, and missing prediction entries."""
    n_labels = rng.randint(1, max_labels)
    n_instances = rng.randint(1, max_instances)
    n_runs = rng.randint(1, max_runs)
    labels = [f"L{j}" for j in range(n_labels)]
    ids = [f"i{k:03d}" for k in range(n_instances)]

    def random_set():
        return {j for j in range(n_labels) if rng.random() < 0.35}

    truth = {iid: random_set() for iid in ids}
    runs = {}
    for r in range(n_runs):
        preds = {}
        for iid in ids:
            if rng.random() < 0.1:
                continue  # omitted entry; reads back as the empty set
            preds[iid] = random_set()
        runs[f"run{r}"] = preds
    return build_dataset(labels, truth, runs, name=f"fuzz-{rng.randint(0, 10**9)}")


@pytest.fixture
def tiny_dataset():
    """Hand-checkable: 4 instances, 3 labels, 2 runs.

    Label 2 never occurs in the truth, so its recall is undefined for
    every run; instance i3 has an empty truth set.
    """
    return build_dataset(
        labels=["alpha", "beta", "gamma"],
        truth={
            "i0": {0, 1},
            "i1": {0},
            "i2": {1},
            "i3": set(),
        },
        runs={
            "good": {"i0": {0, 1}, "i1": {0}, "i2": {1}, "i3": set()},
            "noisy": {"i0": {0}, "i1": {0, 2}, "i2": set(), "i3": {1}},
        },
    )


@pytest.fixture
def perfect_dataset():
    truth = {"a": {0, 2}, "b": {1}, "c": set()}
    return build_dataset(
        labels=["x", "y", "z"],
        truth=truth,
        runs={"mirror": {iid: set(members) for iid, members in truth.items()}},
    )


@pytest.fixture
def text_dataset_dir(tmp_path):
    """A text-document dataset written in the directory layout, with one
    hard run file and one scored run file."""
    root = tmp_path / "textset"
    root.mkdir()
    (root / "manifest.json").write_text(
        '{\n'
        '  "name": "reviews",\n'
        '  "document_kind": "text",\n'
        '  "ground_truth": "truth.tsv",\n'
        '  "predictions": [\n'
        '    {"name": "rules", "file": "rules.tsv", "scored": false},\n'
        '    {"name": "model", "file": "model.tsv", "scored": true}\n'
        '  ]\n'
        '}\n',
        encoding="utf-8",
    )
    (root / "labels.txt").write_text("positive\nnegative\nspam\n", encoding="utf-8")
    (root / "truth.tsv").write_text(
        "r1\tgreat stuff\tpositive\n"
        "r2\tterrible\\nawful\tnegative\n"
        "r3\tbuy pills now\tnegative;spam\n"
        "r4\tmeh\t\n",
        encoding="utf-8",
    )
    (root / "rules.tsv").write_text(
        "r1\t\tpositive\n"
        "r2\t\tnegative;spam\n"
        "r3\t\tspam\n"
        "r4\t\t\n",
        encoding="utf-8",
    )
    (root / "model.tsv").write_text(
        "r1\tpositive=0.9;negative=0.05\n"
        "r2\tnegative=0.8;spam=0.3\n"
        "r3\tspam=0.95;negative=0.55\n"
        "r4\tpositive=0.5\n",
        encoding="utf-8",
    )
    return root


@pytest.fixture
def audio_dataset_dir(tmp_path):
    """An audio dataset whose media files exist on disk (small fake WAVs)."""
    root = tmp_path / "audioset"
    root.mkdir()
    (root / "clips").mkdir()
    payload = bytes(range(256)) * 8  # 2048 bytes, distinct at every offset
    (root / "clips" / "a.wav").write_bytes(payload)
    (root / "clips" / "b.wav").write_bytes(payload[::-1])
    (root / "manifest.json").write_text(
        '{\n'
        '  "name": "clips",\n'
        '  "document_kind": "audio",\n'
        '  "ground_truth": "truth.tsv",\n'
        '  "predictions": [{"name": "tagger", "file": "tagger.tsv", "scored": false}]\n'
        '}\n',
        encoding="utf-8",
    )
    (root / "labels.txt").write_text("speech\nmusic\n", encoding="utf-8")
    (root / "truth.tsv").write_text(
        "a\tclips/a.wav\tspeech\n"
        "b\tclips/b.wav\tspeech;music\n",
        encoding="utf-8",
    )
    (root / "tagger.tsv").write_text(
        "a\t\tspeech;music\n"
        "b\t\tmusic\n",
        encoding="utf-8",
    )
    return root


def make_engineered_confusion_dataset(n_labels=7, n_classes=80, n_runs=3):
    """Exactly n_classes distinct label sets, cyclically shifted per run so
    every run shares one table and the diagonal is empty for shifted runs."""
    assert n_classes <= 2**n_labels
    labels = [f"L{j}" for j in range(n_labels)]
    pool = []
    for mask in range(2**n_labels):
        members = frozenset(j for j in range(n_labels) if mask >> j & 1)
        pool.append(members)
    pool.sort(key=lambda s: (len(s), tuple(sorted(s))))
    pool = pool[:n_classes]
    ids = [f"c{k:03d}" for k in range(n_classes)]
    truth = {ids[k]: set(pool[k]) for k in range(n_classes)}
    runs = {}
    for r in range(n_runs):
        shift = r  # run 0 is the identity and fills the diagonal
        runs[f"shift{r}"] = {ids[k]: set(pool[(k + shift) % n_classes]) for k in range(n_classes)}
    return build_dataset(labels, truth, runs, name="engineered-80")
