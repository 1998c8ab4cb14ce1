"""Fabricate a complete mock dataset and build manifest on disk.

The generated corpus reproduces the published dataset shape: by default 235
invented terms owning 676 textures in total.  The texture generator drops
variation index 2 for "failure" prompts (hash % 7 == 0), so terms come in
3-texture and 2-texture flavors; surfaces are enumerated deterministically
and selected so the failure count lands exactly on the requested totals.

Output layout under ``out_dir``::

    manifest.json              build manifest (all paths relative to out_dir)
    terms.json                 surfaces + staged prompts + text embedding ids
    textures.json              ownership table (texture -> term, file paths)
    image_embeddings.jsonl     {"id": ..., "vector": [512 floats]} per line
    text_embeddings.jsonl      {"id": ..., "vector": [1536 floats]} per line
    images/<texture_id>.png    256x256 texture rasters
    thumbs/<texture_id>.png    64x64 thumbnails
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .providers import (
    MockImageEmbedder,
    MockPromptStager,
    MockSeedConfig,
    MockTextEmbedder,
    MockTextureGenerator,
)
from . import rasters
from .rng import stream_for


def invent_surfaces(config: MockSeedConfig, count: int, skip: int = 0):
    """Deterministic stream of distinct reduplicated surfaces."""
    stream = stream_for(config.seed, "invent-surfaces")
    seen = set()
    out = []
    while len(out) < count + skip:
        inventory = config.syllables
        core = inventory[stream.below(len(inventory))] + inventory[stream.below(len(inventory))]
        if stream.below(2) == 1:
            core += inventory[stream.below(len(inventory))]
        surface = core + core
        surface = surface[0].upper() + surface[1:]
        if surface in seen:
            continue
        seen.add(surface)
        out.append(surface)
    return out[skip:]


def plan_term_mix(n_terms: int, n_textures: int) -> tuple[int, int]:
    """How many 3-texture and 2-texture terms to hit the exact totals."""
    two_texture = 3 * n_terms - n_textures
    three_texture = n_terms - two_texture
    if two_texture < 0 or three_texture < 0:
        raise ValueError(
            f"{n_textures} textures unreachable with {n_terms} terms owning 2 or 3 each"
        )
    return three_texture, two_texture


def generate_dataset(
    out_dir,
    n_terms: int = 235,
    n_textures: int = 676,
    seed: int = 0,
) -> dict:
    """Write the dataset and return the manifest dict."""
    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)
    (out / "thumbs").mkdir(parents=True, exist_ok=True)

    config = MockSeedConfig(seed=seed)
    stager = MockPromptStager(config)
    generator = MockTextureGenerator(config)
    image_embedder = MockImageEmbedder(config)
    text_embedder = MockTextEmbedder(config)

    want_full, want_short = plan_term_mix(n_terms, n_textures)

    full_terms: list[tuple[str, object]] = []
    short_terms: list[tuple[str, object]] = []
    stream_skip = 0
    while len(full_terms) < want_full or len(short_terms) < want_short:
        batch = invent_surfaces(config, 64, skip=stream_skip)
        stream_skip += 64
        for surface in batch:
            stages = stager.stage_prompts(surface)
            if generator.failure_hash(stages):
                if len(short_terms) < want_short:
                    short_terms.append((surface, stages))
            elif len(full_terms) < want_full:
                full_terms.append((surface, stages))

    chosen = sorted(full_terms + short_terms, key=lambda pair: pair[0])

    terms = []
    textures = []
    image_lines = []
    text_lines = []
    for i, (surface, stages) in enumerate(chosen):
        term_id = f"term-{i:04d}"
        text_id = f"emb-txt-{term_id}"
        terms.append(
            {
                "term_id": term_id,
                "surface": surface,
                "stages": stages.to_dict(),
                "text_embedding_id": text_id,
            }
        )
        vec = text_embedder.embed_text(stages.english_description)
        text_lines.append({"id": text_id, "vector": [float(v) for v in vec]})

        for j, image in enumerate(generator.generate_textures(stages, 3)):
            texture_id = f"tex-{i:04d}-{j}"
            image_path = f"images/{texture_id}.png"
            thumb_path = f"thumbs/{texture_id}.png"
            (out / image_path).write_bytes(image)
            pixels = rasters.decode_rgb(image)
            (out / thumb_path).write_bytes(rasters.encode_png(rasters.thumbnail(pixels)))
            image_id = f"emb-img-{texture_id}"
            textures.append(
                {
                    "texture_id": texture_id,
                    "term_id": term_id,
                    "image_path": image_path,
                    "thumbnail_path": thumb_path,
                    "image_embedding_id": image_id,
                }
            )
            ivec = image_embedder.embed_image(image)
            image_lines.append({"id": image_id, "vector": [float(v) for v in ivec]})

    assert len(textures) == n_textures, f"planned {n_textures}, produced {len(textures)}"

    (out / "terms.json").write_text(json.dumps(terms, indent=1, sort_keys=True))
    (out / "textures.json").write_text(json.dumps(textures, indent=1, sort_keys=True))
    with open(out / "image_embeddings.jsonl", "w") as fh:
        for line in image_lines:
            fh.write(json.dumps(line, sort_keys=True) + "\n")
    with open(out / "text_embeddings.jsonl", "w") as fh:
        for line in text_lines:
            fh.write(json.dumps(line, sort_keys=True) + "\n")

    manifest = {
        "terms_path": "terms.json",
        "ownership_path": "textures.json",
        "image_embeddings_path": "image_embeddings.jsonl",
        "text_embeddings_path": "text_embeddings.jsonl",
        "params": {"seed": seed},
        "output_path": "atlas.json",
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return manifest


def _disc(xx, yy, cx, cy, r):
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r


def object_image(object_id: str, config: MockSeedConfig | None = None, size: int = 256) -> bytes:
    """Deterministic base image for a target object (vase or headphones)."""
    config = config or MockSeedConfig()
    stream = stream_for(config.seed, "object", object_id)
    hue = stream.uniform_array(3) * 90.0 + 40.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    shade = yy / size * 60.0
    pixels = np.zeros((size, size, 3), dtype=np.float64)
    pixels += hue[None, None, :] + shade[:, :, None]

    cx = size / 2
    if object_id == "vase":
        # body: width varies with height like a turned profile
        t = yy / size
        width = size * (0.12 + 0.22 * np.sin(np.pi * t) ** 2 + 0.08 * (1 - t))
        mask = (np.abs(xx - cx) <= width) & (t > 0.12) & (t < 0.95)
    elif object_id == "headphones":
        band = _disc(xx, yy, cx, size * 0.52, size * 0.34) & ~_disc(
            xx, yy, cx, size * 0.56, size * 0.27
        ) & (yy < size * 0.52)
        cups = _disc(xx, yy, cx - size * 0.31, size * 0.58, size * 0.11) | _disc(
            xx, yy, cx + size * 0.31, size * 0.58, size * 0.11
        )
        mask = band | cups
    else:
        raise ValueError(f"unknown target object {object_id!r}")

    pixels[mask] = pixels[mask] * 0.35 + 140.0
    return rasters.encode_png(np.clip(np.rint(pixels), 0, 255).astype(np.uint8))


def simulation_frame(seed: int, index: int, size: int = 256) -> bytes:
    """Standalone procedural frame for the offline replot simulator."""
    stream = stream_for(seed, "sim-frame", index)
    return rasters.encode_png(rasters.procedural_texture(stream, size=size))
