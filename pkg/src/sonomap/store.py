"""File-backed persistence for the exploration service.

Everything lives in one data directory, so a service restart reloads to an
equivalent state from plain files:

    atlas.json                  the atlas (including dynamic points)
    gallery.json                gallery items + id counter
    jobs/<job_id>.json          job metadata
    jobs/<job_id>/frame_NN.png  frames of finished jobs
    objects/<object_id>.png     target object base images
    composites/<obj>__<ref>.png cached texture applications

Jobs that were pending or running when the process died reload as failed
with an explanatory error.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .replot import InterpolationJob, JobStatus

RESTART_ERROR = "interrupted by service restart"
TARGET_OBJECTS = ("vase", "headphones")


@dataclass
class GalleryItem:
    item_id: str
    ref: str
    added_at: str
    position: int

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "ref": self.ref,
            "added_at": self.added_at,
            "position": self.position,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GalleryItem":
        return cls(
            item_id=d["item_id"],
            ref=d["ref"],
            added_at=d["added_at"],
            position=d["position"],
        )


def atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class DataStore:
    """Path layout plus load/save for the mutable collections."""

    def __init__(self, data_dir):
        self.root = Path(data_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        for sub in ("jobs", "objects", "composites"):
            (self.root / sub).mkdir(exist_ok=True)

    @property
    def atlas_path(self) -> Path:
        return self.root / "atlas.json"

    @property
    def gallery_path(self) -> Path:
        return self.root / "gallery.json"

    def object_path(self, object_id: str) -> Path:
        return self.root / "objects" / f"{object_id}.png"

    def composite_rel_path(self, object_id: str, ref: str) -> str:
        return f"composites/{object_id}__{ref}.png"

    def job_meta_path(self, job_id: str) -> Path:
        return self.root / "jobs" / f"{job_id}.json"

    def frame_rel_path(self, job_id: str, index: int) -> str:
        return f"jobs/{job_id}/frame_{index:02d}.png"

    def resolve(self, rel_path: str) -> Path:
        return self.root / rel_path

    # -- gallery ---------------------------------------------------------

    def save_gallery(self, items: list[GalleryItem], next_id: int) -> None:
        doc = {
            "items": [item.to_dict() for item in items],
            "next_id": next_id,
        }
        atomic_write_text(self.gallery_path, json.dumps(doc, sort_keys=True, indent=1))

    def load_gallery(self) -> tuple[list[GalleryItem], int]:
        if not self.gallery_path.exists():
            return [], 0
        doc = json.loads(self.gallery_path.read_text())
        items = [GalleryItem.from_dict(d) for d in doc["items"]]
        items.sort(key=lambda it: it.position)
        return items, doc["next_id"]

    # -- jobs ------------------------------------------------------------

    def save_job(self, job: InterpolationJob) -> None:
        meta = {
            "job_id": job.job_id,
            "source_texture_a": job.source_texture_a,
            "source_texture_b": job.source_texture_b,
            "status": job.status.value,
            "frame_count": job.frame_count,
            "error": job.error,
        }
        atomic_write_text(self.job_meta_path(job.job_id), json.dumps(meta, sort_keys=True, indent=1))

    def save_frames(self, job: InterpolationJob) -> list[str]:
        frame_dir = self.root / "jobs" / job.job_id
        frame_dir.mkdir(exist_ok=True)
        paths = []
        for i, frame in enumerate(job.frames):
            rel = self.frame_rel_path(job.job_id, i)
            (self.root / rel).write_bytes(frame)
            paths.append(rel)
        return paths

    def load_jobs(self) -> dict[str, InterpolationJob]:
        jobs: dict[str, InterpolationJob] = {}
        for meta_path in sorted(self.root.glob("jobs/*.json")):
            meta = json.loads(meta_path.read_text())
            status = JobStatus(meta["status"])
            job = InterpolationJob(
                job_id=meta["job_id"],
                source_texture_a=meta["source_texture_a"],
                source_texture_b=meta["source_texture_b"],
            )
            if status is JobStatus.DONE:
                frames = []
                for i in range(meta["frame_count"]):
                    frame_file = self.resolve(self.frame_rel_path(job.job_id, i))
                    frames.append(frame_file.read_bytes())
                job.transition(JobStatus.RUNNING)
                job.frames = frames
                job.transition(JobStatus.DONE)
            elif status is JobStatus.FAILED:
                job.transition(JobStatus.RUNNING)
                job.error = meta["error"]
                job.transition(JobStatus.FAILED)
            else:
                # interrupted before completion; frames are gone
                job.transition(JobStatus.RUNNING)
                job.error = RESTART_ERROR
                job.transition(JobStatus.FAILED)
                self.save_job(job)
            jobs[job.job_id] = job
        return jobs
