"""HTTP/JSON service exposing datasets, metrics, and instance documents.

All numeric payloads come from :mod:`mlmc.reports`, the same builders the CLI
uses, so the two surfaces cannot drift apart. Datasets are immutable once
loaded; upload is the only mutation and becomes visible only after the archive
parsed and validated cleanly.
"""

from __future__ import annotations

import io
import os
import shutil
import tempfile
import uuid
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from threading import Lock

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import reports
from .ingest import IngestError, parse_dataset
from .metrics import DatasetMetrics
from .model import Dataset, ReportEntry, ValidationReport

DEFAULT_UPLOAD_CAP = 64 * 1024 * 1024

DATA_ROOT_ENV = "MLMC_DATA_ROOT"
STATIC_DIR_ENV = "MLMC_STATIC_DIR"
UPLOAD_CAP_ENV = "MLMC_UPLOAD_CAP"

UPLOADS_DIRNAME = "uploads"


@dataclass
class ApiConfig:
    data_root: Path | None = None
    static_dir: Path | None = None
    upload_cap: int = DEFAULT_UPLOAD_CAP

    @classmethod
    def from_env(cls, environ=os.environ) -> "ApiConfig":
        root = environ.get(DATA_ROOT_ENV)
        static = environ.get(STATIC_DIR_ENV)
        cap = environ.get(UPLOAD_CAP_ENV)
        return cls(
            data_root=Path(root) if root else None,
            static_dir=Path(static) if static else None,
            upload_cap=int(cap) if cap else DEFAULT_UPLOAD_CAP,
        )


@dataclass
class LoadedDataset:
    dataset: Dataset
    metrics: DatasetMetrics
    report: ValidationReport


@dataclass
class DatasetStore:
    """Loaded datasets keyed by content hash.

    Reads are lock-free over the immutable mapping snapshot; additions are
    serialized. Identical content hashes to the same id, so re-uploading an
    existing dataset is a no-op.
    """

    upload_root: Path
    _lock: Lock = field(default_factory=Lock)
    _entries: dict[str, LoadedDataset] = field(default_factory=dict)

    def get(self, dataset_id: str) -> LoadedDataset:
        try:
            return self._entries[dataset_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown dataset id {dataset_id!r}")

    def ids(self) -> list[str]:
        return list(self._entries)

    def add(self, dataset: Dataset, report: ValidationReport) -> tuple[str, bool]:
        """Insert a parsed dataset; returns (id, created)."""
        dataset_id = dataset.content_hash
        with self._lock:
            if dataset_id in self._entries:
                return dataset_id, False
            self._entries[dataset_id] = LoadedDataset(dataset, DatasetMetrics(dataset), report)
            return dataset_id, True

    def load_directory(self, root: Path) -> str:
        result = parse_dataset(root)
        dataset_id, _ = self.add(result.dataset, result.report)
        return dataset_id


def _scan_data_root(store: DatasetStore, data_root: Path) -> None:
    """Load the dataset at data_root, or every child directory holding a
    manifest. Directories that fail to parse are skipped; the server still
    starts and accepts uploads."""
    candidates = []
    if (data_root / "manifest.json").is_file():
        candidates.append(data_root)
    else:
        for child in sorted(data_root.iterdir()) if data_root.is_dir() else []:
            if child.name == UPLOADS_DIRNAME:
                continue
            if (child / "manifest.json").is_file():
                candidates.append(child)
    uploads = data_root / UPLOADS_DIRNAME
    if uploads.is_dir():
        for child in sorted(uploads.iterdir()):
            if (child / "manifest.json").is_file():
                candidates.append(child)
    for candidate in candidates:
        try:
            store.load_directory(candidate)
        except (IngestError, OSError):
            continue


def _safe_extract(archive: zipfile.ZipFile, target: Path) -> None:
    """Extract refusing absolute member names and parent traversal."""
    resolved_target = target.resolve()
    for member in archive.infolist():
        name = member.filename
        if name.startswith(("/", "\\")) or ".." in Path(name).parts:
            raise HTTPException(status_code=400, detail=f"unsafe archive member {name!r}")
        destination = (target / name).resolve()
        if not destination.is_relative_to(resolved_target):
            raise HTTPException(status_code=400, detail=f"unsafe archive member {name!r}")
    archive.extractall(target)


def _locate_dataset_root(extracted: Path) -> Path:
    """The ingest layout may sit at the archive root or inside one folder."""
    if (extracted / "manifest.json").is_file():
        return extracted
    children = [c for c in sorted(extracted.iterdir()) if c.is_dir()]
    with_manifest = [c for c in children if (c / "manifest.json").is_file()]
    if len(with_manifest) == 1:
        return with_manifest[0]
    raise HTTPException(status_code=400, detail="archive does not contain manifest.json")


async def _read_body_capped(request: Request, cap: int) -> bytes:
    chunks = []
    size = 0
    async for chunk in request.stream():
        size += len(chunk)
        if size > cap:
            raise HTTPException(status_code=413, detail=f"upload exceeds {cap} bytes")
        chunks.append(chunk)
    return b"".join(chunks)


def _report_json(report: ValidationReport) -> dict:
    return report.to_json()


def create_app(config: ApiConfig | None = None) -> FastAPI:
    config = config or ApiConfig.from_env()
    app = FastAPI(title="mlmc", docs_url=None, redoc_url=None)

    if config.data_root is not None:
        upload_root = config.data_root / UPLOADS_DIRNAME
    else:
        tmp = tempfile.mkdtemp(prefix="mlmc-uploads-")
        upload_root = Path(tmp)
    store = DatasetStore(upload_root=upload_root)
    if config.data_root is not None:
        _scan_data_root(store, config.data_root)
    app.state.store = store
    app.state.config = config

    @app.post("/api/v1/datasets")
    async def upload_dataset(request: Request) -> JSONResponse:
        body = await _read_body_capped(request, config.upload_cap)
        if not zipfile.is_zipfile(io.BytesIO(body)):
            raise HTTPException(status_code=400, detail="body is not a zip archive")
        store.upload_root.mkdir(parents=True, exist_ok=True)
        scratch = store.upload_root / uuid.uuid4().hex
        scratch.mkdir()
        try:
            with zipfile.ZipFile(io.BytesIO(body)) as archive:
                _safe_extract(archive, scratch)
            root = _locate_dataset_root(scratch)
            try:
                result = parse_dataset(root)
            except IngestError as exc:
                raise HTTPException(status_code=400, detail=_report_json(exc.report))
            dataset_id, created = store.add(result.dataset, result.report)
        except BaseException:
            shutil.rmtree(scratch, ignore_errors=True)
            raise
        if not created:
            shutil.rmtree(scratch, ignore_errors=True)
        return JSONResponse(
            status_code=201 if created else 200,
            content={"id": dataset_id, "report": _report_json(result.report)},
        )

    @app.get("/api/v1/datasets")
    def list_datasets() -> dict:
        rows = []
        for dataset_id in store.ids():
            entry = store.get(dataset_id)
            ds = entry.dataset
            rows.append(
                {
                    "id": dataset_id,
                    "name": ds.name,
                    "instances": len(ds.instances),
                    "labels": len(ds.registry),
                    "runs": len(ds.runs),
                    "document_kind": ds.document_kind,
                }
            )
        return {"datasets": rows}

    @app.get("/api/v1/datasets/{dataset_id}/summary")
    def get_summary(dataset_id: str) -> dict:
        entry = store.get(dataset_id)
        payload = reports.summary_payload(entry.metrics)
        payload["id"] = dataset_id
        payload["report"] = _report_json(entry.report)
        return payload

    @app.get("/api/v1/datasets/{dataset_id}/labels")
    def get_label_metrics(
        dataset_id: str,
        sort: str = "id",
        direction: str = "asc",
        run: str | None = None,
    ) -> dict:
        entry = store.get(dataset_id)
        try:
            return reports.label_metrics_payload(entry.metrics, sort, direction, run)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/v1/datasets/{dataset_id}/similarity")
    def get_similarity(dataset_id: str, precision: str = "4") -> dict:
        entry = store.get(dataset_id)
        if precision not in ("4", "full"):
            raise HTTPException(status_code=400, detail=f"unknown precision {precision!r}")
        return reports.similarity_payload(entry.metrics, full_precision=precision == "full")

    @app.get("/api/v1/datasets/{dataset_id}/instances")
    def get_instances(
        dataset_id: str,
        label: int | None = None,
        page: int = Query(default=0, ge=0),
        page_size: int = Query(default=reports.DEFAULT_PAGE_SIZE, ge=1, le=1000),
    ) -> dict:
        entry = store.get(dataset_id)
        try:
            return reports.instances_payload(entry.metrics, label, page, page_size)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/v1/datasets/{dataset_id}/instances/{instance_id}/document")
    def get_document(dataset_id: str, instance_id: str, request: Request) -> Response:
        entry = store.get(dataset_id)
        ds = entry.dataset
        try:
            inst = ds.instance(instance_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown instance id {instance_id!r}")
        doc = inst.document
        if doc.kind == "none":
            return Response(status_code=204)
        if doc.kind == "text":
            return PlainTextResponse(doc.payload)
        path = (ds.root / doc.payload) if ds.root is not None else None
        if path is None or not path.is_file():
            entry_json = ReportEntry(
                severity="error",
                code="document-missing",
                message=f"document file {doc.payload!r} for instance {instance_id!r} is not on disk",
            )
            return JSONResponse(
                status_code=410,
                content={"detail": "document file missing", "report": entry_json.to_json()},
            )
        media_type = doc.mime or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    @app.get("/api/v1/datasets/{dataset_id}/confusion/{run_name}")
    def get_tuple_confusion(dataset_id: str, run_name: str, format: str = "json"):
        entry = store.get(dataset_id)
        try:
            entry.dataset.run(run_name)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown run name {run_name!r}")
        if format == "json":
            return reports.confusion_payload(entry.metrics, run_name)
        if format == "csv":
            return PlainTextResponse(
                reports.confusion_csv(entry.metrics, run_name), media_type="text/csv"
            )
        raise HTTPException(status_code=400, detail=f"unknown format {format!r}")

    static_dir = config.static_dir
    if static_dir is None:
        fallback = Path("frontend") / "dist"
        if fallback.is_dir():
            static_dir = fallback
    if static_dir is not None and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="dashboard")

    return app
