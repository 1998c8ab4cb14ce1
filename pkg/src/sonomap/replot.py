"""The emergent loop: re-embed an extracted video frame into both maps.

Four stages, each behind a provider:

  1. analyze_frame     frame -> invented surface
  2. describe_concept  surface -> concept description
  3. embed_image (512) + embed_text (1536)
  4. transform against the fitted image and text models (no refitting)

The append to ``atlas.dynamic_points`` is all-or-nothing: a failure at any
stage raises a ProviderError tagged with the stage's provider name and leaves
the atlas untouched.  The models are read-only throughout, so static
coordinates are bit-identical before and after any number of replots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .atlas import Atlas, ReplotRecord
from .errors import ProviderError
from .projection import MODALITY_DIMS, umap_transform
from .providers import ProviderSet, call_provider

__all__ = ["InterpolationJob", "JobStatus", "ReplotRecord", "extract_frame", "replot_frame"]


class JobStatus(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


_ALLOWED_TRANSITIONS = {
    JobStatus.PENDING: {JobStatus.RUNNING},
    JobStatus.RUNNING: {JobStatus.DONE, JobStatus.FAILED},
    JobStatus.DONE: set(),
    JobStatus.FAILED: set(),
}


@dataclass
class InterpolationJob:
    """An asynchronous A->B video generation task."""

    job_id: str
    source_texture_a: str
    source_texture_b: str
    status: JobStatus = JobStatus.PENDING
    frames: list[bytes] = field(default_factory=list)
    error: str | None = None

    def transition(self, new_status: JobStatus) -> None:
        if new_status not in _ALLOWED_TRANSITIONS[self.status]:
            raise ValueError(f"illegal job transition {self.status.value} -> {new_status.value}")
        self.status = new_status

    @property
    def frame_count(self) -> int:
        return len(self.frames)


def extract_frame(job: InterpolationJob, index: int) -> bytes:
    """The exact stored frame at ``index`` of a finished job."""
    if job.status is not JobStatus.DONE:
        raise ValueError(f"job {job.job_id!r} is {job.status.value}, not done")
    if not 0 <= index < len(job.frames):
        raise IndexError(f"frame index {index} out of range [0, {len(job.frames)})")
    return job.frames[index]


def replot_frame(
    atlas: Atlas,
    providers: ProviderSet,
    frame: bytes,
    job_id: str,
    frame_index: int,
) -> ReplotRecord:
    """Run the four-stage pipeline and append the resulting dynamic point."""
    timeout = providers.timeout_s
    surface = call_provider(providers.frame_analyzer, "analyze_frame", frame, timeout=timeout)
    description = call_provider(
        providers.concept_describer, "describe_concept", surface, timeout=timeout
    )
    image_vec = call_provider(providers.image_embedder, "embed_image", frame, timeout=timeout)
    text_vec = call_provider(providers.text_embedder, "embed_text", description, timeout=timeout)

    if image_vec.shape != (MODALITY_DIMS["image"],):
        raise ProviderError(providers.image_embedder.name, f"bad dimension {image_vec.shape}")
    if text_vec.shape != (MODALITY_DIMS["text"],):
        raise ProviderError(providers.text_embedder.name, f"bad dimension {text_vec.shape}")

    image_coord = umap_transform(atlas.image_model, image_vec)[0]
    text_coord = umap_transform(atlas.text_model, text_vec)[0]

    with atlas.writer_lock:
        record = ReplotRecord(
            replot_id=f"replot-{len(atlas.dynamic_points):04d}",
            job_id=job_id,
            frame_index=frame_index,
            surface=surface,
            description=description,
            image_coord=(float(image_coord[0]), float(image_coord[1])),
            text_coord=(float(text_coord[0]), float(text_coord[1])),
        )
        atlas.dynamic_points.append(record)
    return record
