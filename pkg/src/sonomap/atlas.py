"""The atlas: terms, textures, their authored links, and both fitted maps.

Cross-modal relations are authored, not inferred: each invented term owns the
1-3 textures generated from its staged prompt text, and highlighting simply
reads that ownership table in both directions.

The atlas serializes to one canonical JSON document (sorted keys, shortest
round-trip floats, compact separators, trailing newline).  Records are sorted
by id before fitting, so the document is independent of input record order
and byte-stable across runs with the same seed.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import AtlasValidationError
from .params import UmapParams
from .projection import MODALITY_DIMS, EmbeddingVector, UmapModel, umap_fit

ATLAS_VERSION = 1
MIN_TEXTURES_PER_TERM = 1
MAX_TEXTURES_PER_TERM = 3
DYNAMIC_POINT_COLOR = "orange"


@dataclass
class PromptStages:
    """The four-stage prompt chain behind one invented term.

    ``english_description`` is the shared representation: it is the text that
    gets embedded for the language map and the text that links the term to
    its generated textures.
    """

    material: str
    physical_qualities: str
    english_description: str
    image_prompt: str

    def __post_init__(self):
        for name in ("material", "physical_qualities", "english_description", "image_prompt"):
            if not getattr(self, name):
                raise AtlasValidationError(f"prompt stage {name!r} must be non-empty")

    def to_dict(self) -> dict:
        return {
            "material": self.material,
            "physical_qualities": self.physical_qualities,
            "english_description": self.english_description,
            "image_prompt": self.image_prompt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PromptStages":
        return cls(
            material=d["material"],
            physical_qualities=d["physical_qualities"],
            english_description=d["english_description"],
            image_prompt=d["image_prompt"],
        )


@dataclass
class TermRecord:
    term_id: str
    surface: str
    stages: PromptStages
    text_embedding_id: str
    coord: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.surface:
            raise AtlasValidationError(f"term {self.term_id!r} has an empty surface")


@dataclass
class TextureRecord:
    texture_id: str
    term_id: str
    image_path: str
    thumbnail_path: str
    image_embedding_id: str
    coord: tuple[float, float] | None = None


@dataclass
class ReplotRecord:
    """A video frame re-embedded into both maps without retraining.

    The source dims record which model produced which coordinate (image 512,
    text 1536), so a crossed pipeline is detectable from the document alone.
    """

    replot_id: str
    job_id: str
    frame_index: int
    surface: str
    description: str
    image_coord: tuple[float, float]
    text_coord: tuple[float, float]
    dynamic: bool = True
    display_color: str = DYNAMIC_POINT_COLOR
    image_source_dim: int = MODALITY_DIMS["image"]
    text_source_dim: int = MODALITY_DIMS["text"]

    def to_dict(self) -> dict:
        return {
            "replot_id": self.replot_id,
            "job_id": self.job_id,
            "frame_index": self.frame_index,
            "surface": self.surface,
            "description": self.description,
            "image_coord": [float(self.image_coord[0]), float(self.image_coord[1])],
            "text_coord": [float(self.text_coord[0]), float(self.text_coord[1])],
            "dynamic": self.dynamic,
            "display_color": self.display_color,
            "image_source_dim": self.image_source_dim,
            "text_source_dim": self.text_source_dim,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReplotRecord":
        return cls(
            replot_id=d["replot_id"],
            job_id=d["job_id"],
            frame_index=d["frame_index"],
            surface=d["surface"],
            description=d["description"],
            image_coord=(d["image_coord"][0], d["image_coord"][1]),
            text_coord=(d["text_coord"][0], d["text_coord"][1]),
            dynamic=d["dynamic"],
            display_color=d["display_color"],
            image_source_dim=d["image_source_dim"],
            text_source_dim=d["text_source_dim"],
        )


@dataclass
class MapBounds:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    @classmethod
    def of(cls, coords: np.ndarray) -> "MapBounds":
        return cls(
            min_x=float(coords[:, 0].min()),
            min_y=float(coords[:, 1].min()),
            max_x=float(coords[:, 0].max()),
            max_y=float(coords[:, 1].max()),
        )

    def contains(self, point, expand: float = 0.0) -> bool:
        """Expansion is a fraction of each axis span added on both sides."""
        dx = (self.max_x - self.min_x) * expand
        dy = (self.max_y - self.min_y) * expand
        return (
            self.min_x - dx <= point[0] <= self.max_x + dx
            and self.min_y - dy <= point[1] <= self.max_y + dy
        )

    def to_dict(self) -> dict:
        return {
            "min_x": self.min_x,
            "min_y": self.min_y,
            "max_x": self.max_x,
            "max_y": self.max_y,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MapBounds":
        return cls(min_x=d["min_x"], min_y=d["min_y"], max_x=d["max_x"], max_y=d["max_y"])


@dataclass(eq=False)
class Atlas:
    """Immutable after build/load except for the append-only dynamic points.

    ``writer_lock`` serializes appends; readers never see a torn record
    because appends are single list operations on fully built records.
    """

    version: int
    params: UmapParams
    terms: list[TermRecord]
    textures: list[TextureRecord]
    image_model: UmapModel
    text_model: UmapModel
    dynamic_points: list[ReplotRecord] = field(default_factory=list)
    bounds: dict[str, MapBounds] = field(default_factory=dict)
    writer_lock: threading.RLock = field(
        default_factory=threading.RLock, repr=False, compare=False
    )

    def __post_init__(self):
        self._terms_by_id = {t.term_id: t for t in self.terms}
        self._textures_by_id = {x.texture_id: x for x in self.textures}
        self._owned: dict[str, list[str]] = {t.term_id: [] for t in self.terms}
        for x in self.textures:
            if x.term_id in self._owned:
                self._owned[x.term_id].append(x.texture_id)
        for owned in self._owned.values():
            owned.sort()

    def term(self, term_id: str) -> TermRecord:
        try:
            return self._terms_by_id[term_id]
        except KeyError:
            raise KeyError(f"unknown term {term_id!r}") from None

    def texture(self, texture_id: str) -> TextureRecord:
        try:
            return self._textures_by_id[texture_id]
        except KeyError:
            raise KeyError(f"unknown texture {texture_id!r}") from None

    def has_term(self, term_id: str) -> bool:
        return term_id in self._terms_by_id

    def has_texture(self, texture_id: str) -> bool:
        return texture_id in self._textures_by_id

    def owned_textures(self, term_id: str) -> list[str]:
        self.term(term_id)
        return list(self._owned[term_id])


def highlight_for_term(atlas: Atlas, term_id: str) -> list[str]:
    """The authored 1-3 texture ids for a term, ordered by texture_id.

    Pure table lookup; no similarity computation is involved.
    """
    return atlas.owned_textures(term_id)


def highlight_for_texture(atlas: Atlas, texture_id: str) -> str:
    """The single term a texture was generated from."""
    return atlas.texture(texture_id).term_id


def build_atlas(
    terms: list[TermRecord],
    textures: list[TextureRecord],
    image_embeddings: dict[str, EmbeddingVector],
    text_embeddings: dict[str, EmbeddingVector],
    params: UmapParams,
) -> Atlas:
    """Fit both maps over the authored dataset and assemble the atlas.

    Records are re-sorted by id so the result is independent of input order.
    Raises AtlasValidationError on orphan textures, ownership counts outside
    1-3, or missing/mismatched embeddings.
    """
    terms = sorted(terms, key=lambda t: t.term_id)
    textures = sorted(textures, key=lambda x: x.texture_id)

    term_ids = [t.term_id for t in terms]
    if len(set(term_ids)) != len(term_ids):
        raise AtlasValidationError("duplicate term_id in input")
    texture_ids = [x.texture_id for x in textures]
    if len(set(texture_ids)) != len(texture_ids):
        raise AtlasValidationError("duplicate texture_id in input")

    known_terms = set(term_ids)
    counts = {tid: 0 for tid in term_ids}
    for x in textures:
        if x.term_id not in known_terms:
            raise AtlasValidationError(
                f"orphan texture {x.texture_id!r}: unknown term {x.term_id!r}"
            )
        counts[x.term_id] += 1
    for tid, count in counts.items():
        if not MIN_TEXTURES_PER_TERM <= count <= MAX_TEXTURES_PER_TERM:
            raise AtlasValidationError(
                f"term {tid!r} owns {count} textures; expected "
                f"{MIN_TEXTURES_PER_TERM}-{MAX_TEXTURES_PER_TERM}"
            )

    def gather(records, key, table, modality):
        dim = MODALITY_DIMS[modality]
        rows = []
        for rec in records:
            eid = getattr(rec, key)
            vec = table.get(eid)
            if vec is None:
                raise AtlasValidationError(f"missing {modality} embedding {eid!r}")
            if vec.modality != modality:
                raise AtlasValidationError(
                    f"embedding {eid!r} has modality {vec.modality!r}, expected {modality!r}"
                )
            rows.append(vec.check_dim(dim).values)
        return np.stack(rows)

    text_matrix = gather(terms, "text_embedding_id", text_embeddings, "text")
    image_matrix = gather(textures, "image_embedding_id", image_embeddings, "image")

    text_model = umap_fit(text_matrix, params, ids=[t.text_embedding_id for t in terms])
    image_model = umap_fit(image_matrix, params, ids=[x.image_embedding_id for x in textures])

    for i, t in enumerate(terms):
        t.coord = (float(text_model.coords[i, 0]), float(text_model.coords[i, 1]))
    for i, x in enumerate(textures):
        x.coord = (float(image_model.coords[i, 0]), float(image_model.coords[i, 1]))

    atlas = Atlas(
        version=ATLAS_VERSION,
        params=params,
        terms=terms,
        textures=textures,
        image_model=image_model,
        text_model=text_model,
        dynamic_points=[],
        bounds={
            "image": MapBounds.of(image_model.coords),
            "text": MapBounds.of(text_model.coords),
        },
    )
    validate_atlas(atlas)
    return atlas


def validate_atlas(atlas: Atlas) -> None:
    """Check every structural invariant; raise naming the first violation."""
    if atlas.version != ATLAS_VERSION:
        raise AtlasValidationError(f"unsupported atlas version {atlas.version}")

    term_ids = [t.term_id for t in atlas.terms]
    if len(set(term_ids)) != len(term_ids):
        raise AtlasValidationError("duplicate term_id")
    texture_ids = [x.texture_id for x in atlas.textures]
    if len(set(texture_ids)) != len(texture_ids):
        raise AtlasValidationError("duplicate texture_id")

    counts = {tid: 0 for tid in term_ids}
    for x in atlas.textures:
        if x.term_id not in counts:
            raise AtlasValidationError(
                f"orphan texture {x.texture_id!r}: unknown term {x.term_id!r}"
            )
        counts[x.term_id] += 1
    for tid, count in counts.items():
        if not MIN_TEXTURES_PER_TERM <= count <= MAX_TEXTURES_PER_TERM:
            raise AtlasValidationError(
                f"term {tid!r} owns {count} textures; expected "
                f"{MIN_TEXTURES_PER_TERM}-{MAX_TEXTURES_PER_TERM}"
            )

    if atlas.text_model.n_points != len(atlas.terms):
        raise AtlasValidationError("text model row count != term count")
    if atlas.image_model.n_points != len(atlas.textures):
        raise AtlasValidationError("image model row count != texture count")
    if atlas.text_model.dim != MODALITY_DIMS["text"]:
        raise AtlasValidationError("text model dimension is not the declared text dim")
    if atlas.image_model.dim != MODALITY_DIMS["image"]:
        raise AtlasValidationError("image model dimension is not the declared image dim")

    for i, t in enumerate(atlas.terms):
        if atlas.text_model.training_ids[i] != t.text_embedding_id:
            raise AtlasValidationError(f"text model row {i} id mismatch for term {t.term_id!r}")
        expected = (float(atlas.text_model.coords[i, 0]), float(atlas.text_model.coords[i, 1]))
        if t.coord is None or tuple(t.coord) != expected:
            raise AtlasValidationError(f"term {t.term_id!r} coord differs from text model row")
        if not np.all(np.isfinite(t.coord)):
            raise AtlasValidationError(f"term {t.term_id!r} has a non-finite coord")
    for i, x in enumerate(atlas.textures):
        if atlas.image_model.training_ids[i] != x.image_embedding_id:
            raise AtlasValidationError(
                f"image model row {i} id mismatch for texture {x.texture_id!r}"
            )
        expected = (float(atlas.image_model.coords[i, 0]), float(atlas.image_model.coords[i, 1]))
        if x.coord is None or tuple(x.coord) != expected:
            raise AtlasValidationError(
                f"texture {x.texture_id!r} coord differs from image model row"
            )

    for name, model in (("image", atlas.image_model), ("text", atlas.text_model)):
        bounds = atlas.bounds.get(name)
        if bounds is None:
            raise AtlasValidationError(f"missing bounds for {name} map")
        tight = MapBounds.of(model.coords)
        if bounds != tight:
            raise AtlasValidationError(f"{name} map bounds are not the tight min/max")

    seen = set()
    for p in atlas.dynamic_points:
        if p.replot_id in seen:
            raise AtlasValidationError(f"duplicate replot_id {p.replot_id!r}")
        seen.add(p.replot_id)
        if not p.dynamic:
            raise AtlasValidationError(f"replot {p.replot_id!r} must be dynamic")
        if p.display_color != DYNAMIC_POINT_COLOR:
            raise AtlasValidationError(
                f"replot {p.replot_id!r} display_color must be {DYNAMIC_POINT_COLOR!r}"
            )
        coords = (*p.image_coord, *p.text_coord)
        if not np.all(np.isfinite(coords)):
            raise AtlasValidationError(f"replot {p.replot_id!r} has a non-finite coord")


def canonical_json(data) -> str:
    """Sorted keys, compact separators, shortest round-trip float repr."""
    return (
        json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)
        + "\n"
    )


def atlas_to_dict(atlas: Atlas) -> dict:
    return {
        "version": atlas.version,
        "params": atlas.params.to_dict(),
        "terms": [
            {
                "term_id": t.term_id,
                "surface": t.surface,
                "stages": t.stages.to_dict(),
                "text_embedding_id": t.text_embedding_id,
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
                "image_embedding_id": x.image_embedding_id,
                "coord": [x.coord[0], x.coord[1]],
            }
            for x in atlas.textures
        ],
        "dynamic_points": [p.to_dict() for p in atlas.dynamic_points],
        "image_model": atlas.image_model.to_dict(),
        "text_model": atlas.text_model.to_dict(),
        "bounds": {name: b.to_dict() for name, b in atlas.bounds.items()},
    }


def atlas_from_dict(data: dict) -> Atlas:
    try:
        atlas = Atlas(
            version=data["version"],
            params=UmapParams.from_dict(data["params"]),
            terms=[
                TermRecord(
                    term_id=t["term_id"],
                    surface=t["surface"],
                    stages=PromptStages.from_dict(t["stages"]),
                    text_embedding_id=t["text_embedding_id"],
                    coord=(t["coord"][0], t["coord"][1]),
                )
                for t in data["terms"]
            ],
            textures=[
                TextureRecord(
                    texture_id=x["texture_id"],
                    term_id=x["term_id"],
                    image_path=x["image_path"],
                    thumbnail_path=x["thumbnail_path"],
                    image_embedding_id=x["image_embedding_id"],
                    coord=(x["coord"][0], x["coord"][1]),
                )
                for x in data["textures"]
            ],
            image_model=UmapModel.from_dict(data["image_model"]),
            text_model=UmapModel.from_dict(data["text_model"]),
            dynamic_points=[ReplotRecord.from_dict(p) for p in data["dynamic_points"]],
            bounds={name: MapBounds.from_dict(b) for name, b in data["bounds"].items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise AtlasValidationError(f"malformed atlas document: {exc}") from exc
    validate_atlas(atlas)
    return atlas


def save_atlas(atlas: Atlas, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(atlas_to_dict(atlas)))


def load_atlas(path) -> Atlas:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return atlas_from_dict(data)
