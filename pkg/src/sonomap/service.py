"""HTTP service exposing the atlas, highlighting, gallery, texture
application, interpolation jobs, and replot.

Many readers, one writer: a single re-entrant lock serializes every mutation
of the gallery, the job table, and the atlas's dynamic points, and each
mutation is persisted before the response returns.  Provider calls for
interpolation run on a background worker off the request path; texture
application runs on the request path under the provider timeout.
"""

from __future__ import annotations

import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .atlas import (
    Atlas,
    atlas_to_dict,
    canonical_json,
    highlight_for_term,
    highlight_for_texture,
    load_atlas,
)
from .errors import ProviderError
from .mockdata import object_image
from .providers import MockSeedConfig, ProviderSet, call_provider, mock_provider_set
from .replot import InterpolationJob, JobStatus, extract_frame, replot_frame
from .store import TARGET_OBJECTS, DataStore, GalleryItem, atomic_write_text

ENV_PREFIX = "SONOMAP_"


@dataclass
class ServiceConfig:
    """File config plus environment overrides (SONOMAP_*)."""

    data_dir: str = "data"
    host: str = "127.0.0.1"
    port: int = 8000
    provider_mode: str = "mock"
    seed: int = 0
    timeout_s: float = 30.0

    @classmethod
    def load(cls, config_path: str | None = None, env: dict | None = None) -> "ServiceConfig":
        values: dict = {}
        if config_path:
            values.update(json.loads(Path(config_path).read_text()))
        env = os.environ if env is None else env
        for key, cast in (
            ("data_dir", str),
            ("host", str),
            ("port", int),
            ("provider_mode", str),
            ("seed", int),
            ("timeout_s", float),
        ):
            raw = env.get(ENV_PREFIX + key.upper())
            if raw is not None:
                values[key] = cast(raw)
        return cls(**values)


def build_providers(config: ServiceConfig) -> ProviderSet:
    if config.provider_mode == "mock":
        return mock_provider_set(MockSeedConfig(seed=config.seed), timeout_s=config.timeout_s)
    raise ProviderError(
        "provider_set",
        f"provider mode {config.provider_mode!r} has no adapter in this build; use 'mock'",
    )


@dataclass
class ServiceState:
    config: ServiceConfig
    store: DataStore
    providers: ProviderSet
    atlas: Atlas | None = None
    gallery: list[GalleryItem] = field(default_factory=list)
    next_gallery_id: int = 0
    jobs: dict[str, InterpolationJob] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock)
    workers: ThreadPoolExecutor = field(
        default_factory=lambda: ThreadPoolExecutor(max_workers=2, thread_name_prefix="job")
    )

    def persist_atlas(self) -> None:
        atomic_write_text(self.store.atlas_path, canonical_json(atlas_to_dict(self.atlas)))

    def persist_gallery(self) -> None:
        self.store.save_gallery(self.gallery, self.next_gallery_id)


def load_state(config: ServiceConfig) -> ServiceState:
    store = DataStore(config.data_dir)
    state = ServiceState(config=config, store=store, providers=build_providers(config))
    state.providers.validate()
    if store.atlas_path.exists():
        state.atlas = load_atlas(store.atlas_path)
    state.gallery, state.next_gallery_id = store.load_gallery()
    state.jobs = store.load_jobs()
    for object_id in TARGET_OBJECTS:
        path = store.object_path(object_id)
        if not path.exists():
            path.write_bytes(object_image(object_id, MockSeedConfig(seed=config.seed)))
    return state


def _resolve_image_bytes(state: ServiceState, ref: str) -> bytes:
    """An image for a texture id or replot id; KeyError if unresolvable."""
    atlas = state.atlas
    if atlas.has_texture(ref):
        return state.store.resolve(atlas.texture(ref).image_path).read_bytes()
    for point in atlas.dynamic_points:
        if point.replot_id == ref:
            job = state.jobs.get(point.job_id)
            if job is None:
                raise KeyError(f"replot {ref!r} references unknown job {point.job_id!r}")
            return extract_frame(job, point.frame_index)
    raise KeyError(f"unknown ref {ref!r}")


def _ref_exists(state: ServiceState, ref: str) -> bool:
    if state.atlas.has_texture(ref):
        return True
    return any(p.replot_id == ref for p in state.atlas.dynamic_points)


def _run_job(state: ServiceState, job: InterpolationJob) -> None:
    try:
        with state.lock:
            a_bytes = _resolve_image_bytes(state, job.source_texture_a)
            b_bytes = _resolve_image_bytes(state, job.source_texture_b)
            job.transition(JobStatus.RUNNING)
            state.store.save_job(job)
        frames = call_provider(
            state.providers.video_interpolator,
            "interpolate_video",
            a_bytes,
            b_bytes,
            timeout=state.providers.timeout_s,
        )
        with state.lock:
            job.frames = frames
            job.transition(JobStatus.DONE)
            state.store.save_frames(job)
            state.store.save_job(job)
    except Exception as exc:
        with state.lock:
            if job.status is not JobStatus.FAILED:
                if job.status is JobStatus.PENDING:
                    job.transition(JobStatus.RUNNING)
                job.error = str(exc)
                if job.status is not JobStatus.DONE:
                    job.transition(JobStatus.FAILED)
                state.store.save_job(job)


def _job_payload(state: ServiceState, job: InterpolationJob) -> dict:
    payload = {
        "job_id": job.job_id,
        "source_texture_a": job.source_texture_a,
        "source_texture_b": job.source_texture_b,
        "status": job.status.value,
        "frame_count": job.frame_count,
        "error": job.error,
    }
    if job.status is JobStatus.DONE:
        payload["frame_paths"] = [
            state.store.frame_rel_path(job.job_id, i) for i in range(job.frame_count)
        ]
    return payload


class GalleryAddBody(BaseModel):
    ref: str


class ApplyBody(BaseModel):
    object_id: str
    ref: str


class InterpolateBody(BaseModel):
    texture_a: str
    texture_b: str


class ReplotBody(BaseModel):
    frame_index: int


def create_app(config: ServiceConfig | None = None, *, defer_load: bool = False) -> FastAPI:
    """Build the FastAPI app; with ``defer_load`` the atlas stays unloaded
    (requests then see 503), which models the pre-startup window."""
    config = config or ServiceConfig()
    app = FastAPI(title="sonomap exploration service")
    # The browser client may be served from a separate static host.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    if defer_load:
        store = DataStore(config.data_dir)
        state = ServiceState(config=config, store=store, providers=build_providers(config))
    else:
        state = load_state(config)
    app.state.sonomap = state
    app.mount("/files", StaticFiles(directory=str(state.store.root)), name="files")

    def atlas_or_503() -> Atlas:
        if state.atlas is None:
            raise HTTPException(status_code=503, detail="atlas not loaded yet")
        return state.atlas

    @app.get("/atlas")
    def get_atlas() -> JSONResponse:
        atlas = atlas_or_503()
        with state.lock:
            payload = {
                "version": atlas.version,
                "params": atlas.params.to_dict(),
                "counts": {"terms": len(atlas.terms), "textures": len(atlas.textures)},
                "terms": [
                    {
                        "term_id": t.term_id,
                        "surface": t.surface,
                        "english_description": t.stages.english_description,
                        "coord": [t.coord[0], t.coord[1]],
                    }
                    for t in atlas.terms
                ],
                "textures": [
                    {
                        "texture_id": x.texture_id,
                        "term_id": x.term_id,
                        "image_path": x.image_path,
                        "thumbnail_path": x.thumbnail_path,
                        "coord": [x.coord[0], x.coord[1]],
                    }
                    for x in atlas.textures
                ],
                "dynamic_points": [p.to_dict() for p in atlas.dynamic_points],
                "bounds": {name: b.to_dict() for name, b in atlas.bounds.items()},
            }
        return JSONResponse(payload)

    @app.get("/objects")
    def get_objects() -> dict:
        return {
            "objects": [
                {"object_id": oid, "base_image_path": f"objects/{oid}.png"}
                for oid in TARGET_OBJECTS
            ]
        }

    @app.get("/highlight")
    def get_highlight(kind: str, id: str) -> dict:
        atlas = atlas_or_503()
        def preview_for(term_id: str) -> list[dict]:
            return [
                {
                    "texture_id": tid,
                    "thumbnail_path": atlas.texture(tid).thumbnail_path,
                    "image_path": atlas.texture(tid).image_path,
                }
                for tid in highlight_for_term(atlas, term_id)
            ]

        try:
            if kind == "term":
                ids = highlight_for_term(atlas, id)
                return {"highlighted_ids": ids, "preview": preview_for(id)}
            if kind == "texture":
                term_id = highlight_for_texture(atlas, id)
                return {"highlighted_ids": [term_id], "preview": preview_for(term_id)}
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        raise HTTPException(status_code=400, detail=f"kind must be 'term' or 'texture', got {kind!r}")

    @app.post("/gallery")
    def add_gallery_item(body: GalleryAddBody) -> dict:
        atlas_or_503()
        with state.lock:
            if not _ref_exists(state, body.ref):
                raise HTTPException(status_code=404, detail=f"unknown ref {body.ref!r}")
            item = GalleryItem(
                item_id=f"g-{state.next_gallery_id:04d}",
                ref=body.ref,
                added_at=datetime.now(timezone.utc).isoformat(),
                position=len(state.gallery),
            )
            state.next_gallery_id += 1
            state.gallery.append(item)
            state.persist_gallery()
            return item.to_dict()

    @app.get("/gallery")
    def list_gallery() -> dict:
        atlas_or_503()
        with state.lock:
            return {"items": [item.to_dict() for item in state.gallery]}

    @app.delete("/gallery/{item_id}")
    def delete_gallery_item(item_id: str) -> dict:
        atlas_or_503()
        with state.lock:
            index = next(
                (i for i, item in enumerate(state.gallery) if item.item_id == item_id), None
            )
            if index is None:
                raise HTTPException(status_code=404, detail=f"unknown gallery item {item_id!r}")
            state.gallery.pop(index)
            for pos, item in enumerate(state.gallery):
                item.position = pos
            state.persist_gallery()
            return {"deleted": item_id}

    @app.post("/apply")
    def apply_texture(body: ApplyBody) -> dict:
        atlas_or_503()
        if body.object_id not in TARGET_OBJECTS:
            raise HTTPException(status_code=404, detail=f"unknown object {body.object_id!r}")
        rel = state.store.composite_rel_path(body.object_id, body.ref)
        target = state.store.resolve(rel)
        if target.exists():
            return {"composite_image_path": rel, "cached": True}
        with state.lock:
            try:
                texture_bytes = _resolve_image_bytes(state, body.ref)
            except (KeyError, ValueError) as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
        object_bytes = state.store.object_path(body.object_id).read_bytes()
        try:
            composite = call_provider(
                state.providers.texture_applier,
                "apply_texture",
                object_bytes,
                texture_bytes,
                timeout=state.providers.timeout_s,
            )
        except ProviderError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        target.write_bytes(composite)
        return {"composite_image_path": rel, "cached": False}

    @app.post("/interpolate")
    def start_interpolation(body: InterpolateBody) -> dict:
        atlas_or_503()
        if body.texture_a == body.texture_b:
            raise HTTPException(
                status_code=409, detail="interpolation requires two distinct images"
            )
        with state.lock:
            for ref in (body.texture_a, body.texture_b):
                if not _ref_exists(state, ref):
                    raise HTTPException(status_code=404, detail=f"unknown ref {ref!r}")
            job = InterpolationJob(
                job_id=f"job-{len(state.jobs):04d}",
                source_texture_a=body.texture_a,
                source_texture_b=body.texture_b,
            )
            state.jobs[job.job_id] = job
            state.store.save_job(job)
        state.workers.submit(_run_job, state, job)
        return {"job_id": job.job_id, "status": job.status.value}

    @app.get("/interpolate/{job_id}")
    def job_status(job_id: str) -> dict:
        atlas_or_503()
        with state.lock:
            job = state.jobs.get(job_id)
            if job is None:
                raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
            return _job_payload(state, job)

    @app.post("/interpolate/{job_id}/replot")
    def replot(job_id: str, body: ReplotBody) -> dict:
        atlas = atlas_or_503()
        with state.lock:
            job = state.jobs.get(job_id)
            if job is None:
                raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
            if job.status is not JobStatus.DONE:
                raise HTTPException(
                    status_code=409, detail=f"job {job_id!r} is {job.status.value}, not done"
                )
            if not 0 <= body.frame_index < job.frame_count:
                raise HTTPException(
                    status_code=409,
                    detail=f"frame index {body.frame_index} out of range [0, {job.frame_count})",
                )
            frame = extract_frame(job, body.frame_index)
        try:
            record = replot_frame(atlas, state.providers, frame, job_id, body.frame_index)
        except ProviderError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        with state.lock:
            state.persist_atlas()
        return record.to_dict()

    return app


def run_service(config: ServiceConfig) -> None:
    """Blocking uvicorn runner used by the CLI's serve command."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
