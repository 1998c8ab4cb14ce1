"""Raster plumbing for the mock providers.

Images cross provider boundaries as PNG bytes; internally everything is
(H, W, 3) uint8.  All generators draw from the package's SplitMix64 streams,
so the same inputs always produce the same bytes.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image, UnidentifiedImageError

from .rng import SplitMix64, hash64

TEXTURE_SIZE = 256
THUMBNAIL_SIZE = 64
LATTICE = 8  # low-res color lattice upscaled into the texture


def decode_rgb(data: bytes) -> np.ndarray:
    """PNG/JPEG bytes -> (H, W, 3) uint8.  Raises ValueError if undecodable."""
    try:
        with Image.open(io.BytesIO(data)) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise ValueError(f"undecodable image: {exc}") from exc


def encode_png(pixels: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(pixels, dtype=np.uint8), "RGB").save(buf, format="PNG")
    return buf.getvalue()


def pixel_hash(pixels: np.ndarray) -> int:
    """Content hash over decoded pixels, so re-encoding cannot change identity."""
    arr = np.asarray(pixels, dtype=np.uint8)
    return hash64(arr.tobytes(), arr.shape[0], arr.shape[1])


def procedural_texture(stream: SplitMix64, size: int = TEXTURE_SIZE) -> np.ndarray:
    """Smooth random color field plus fine grain, from one stream."""
    lattice = (stream.uniform_array(LATTICE * LATTICE * 3) * 256.0).astype(np.uint8)
    lattice = lattice.reshape(LATTICE, LATTICE, 3)
    base = Image.fromarray(lattice, "RGB").resize((size, size), Image.BILINEAR)
    grain = (stream.uniform_array(size * size) * 24.0 - 12.0).reshape(size, size, 1)
    pixels = np.asarray(base, dtype=np.float64) + grain
    return np.clip(np.rint(pixels), 0, 255).astype(np.uint8)


def thumbnail(pixels: np.ndarray, size: int = THUMBNAIL_SIZE) -> np.ndarray:
    img = Image.fromarray(np.asarray(pixels, dtype=np.uint8), "RGB")
    return np.asarray(img.resize((size, size), Image.BILINEAR), dtype=np.uint8)


def tile_to(pixels: np.ndarray, height: int, width: int) -> np.ndarray:
    reps_y = -(-height // pixels.shape[0])
    reps_x = -(-width // pixels.shape[1])
    return np.tile(pixels, (reps_y, reps_x, 1))[:height, :width]


def blend_half(base: np.ndarray, overlay: np.ndarray) -> np.ndarray:
    """50/50 blend of the overlay tiled over the base raster."""
    tiled = tile_to(overlay, base.shape[0], base.shape[1])
    mixed = base.astype(np.uint16) + tiled.astype(np.uint16)
    return (mixed // 2).astype(np.uint8)


def dissolve_frames(
    a: np.ndarray,
    b: np.ndarray,
    stream: SplitMix64,
    count: int = 16,
    max_perturb: float = 12.0,
) -> list[np.ndarray]:
    """Directed cross-dissolve with a seeded mid-sequence perturbation.

    Endpoints are exactly the inputs; interior frames get a perturbation field
    whose amplitude peaks mid-way, so they are not pure blends.  Order
    matters: frames(a, b) is not frames(b, a) reversed because the
    perturbation stream differs.
    """
    if b.shape != a.shape:
        b = np.asarray(
            Image.fromarray(b, "RGB").resize((a.shape[1], a.shape[0]), Image.BILINEAR),
            dtype=np.uint8,
        )
    frames = []
    h, w = a.shape[0], a.shape[1]
    af = a.astype(np.float64)
    bf = b.astype(np.float64)
    for t in range(count):
        alpha = t / (count - 1)
        base = (1.0 - alpha) * af + alpha * bf
        amp = max_perturb * np.sin(np.pi * alpha)
        if amp > 0.0:
            field = (stream.uniform_array(h * w) * 2.0 - 1.0).reshape(h, w, 1)
            base = base + amp * field
        frames.append(np.clip(np.rint(base), 0, 255).astype(np.uint8))
    return frames
