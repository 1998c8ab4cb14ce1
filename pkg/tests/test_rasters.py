import numpy as np
import pytest

from sonomap.rasters import (
    blend_half,
    decode_rgb,
    dissolve_frames,
    encode_png,
    pixel_hash,
    procedural_texture,
    thumbnail,
    tile_to,
)
from sonomap.rng import SplitMix64


def test_png_round_trip():
    pixels = procedural_texture(SplitMix64(1), size=32)
    assert np.array_equal(decode_rgb(encode_png(pixels)), pixels)


def test_undecodable_rejected():
    with pytest.raises(ValueError, match="undecodable"):
        decode_rgb(b"not an image at all")


def test_procedural_texture_deterministic():
    a = procedural_texture(SplitMix64(9), size=64)
    b = procedural_texture(SplitMix64(9), size=64)
    assert np.array_equal(a, b)
    c = procedural_texture(SplitMix64(10), size=64)
    assert not np.array_equal(a, c)


def test_pixel_hash_tracks_content_not_encoding():
    pixels = procedural_texture(SplitMix64(2), size=16)
    assert pixel_hash(pixels) == pixel_hash(decode_rgb(encode_png(pixels)))
    other = pixels.copy()
    other[0, 0, 0] ^= 1
    assert pixel_hash(pixels) != pixel_hash(other)


def test_thumbnail_size():
    assert thumbnail(procedural_texture(SplitMix64(3))).shape == (64, 64, 3)


def test_tile_covers_larger_canvas():
    tile = np.arange(12, dtype=np.uint8).reshape(2, 2, 3)
    out = tile_to(tile, 5, 7)
    assert out.shape == (5, 7, 3)
    assert np.array_equal(out[:2, :2], tile)
    assert np.array_equal(out[2:4, 2:4], tile)


def test_blend_half_midpoint():
    base = np.full((4, 4, 3), 100, dtype=np.uint8)
    overlay = np.full((2, 2, 3), 200, dtype=np.uint8)
    assert np.all(blend_half(base, overlay) == 150)


class TestDissolveFrames:
    def test_endpoints_exact(self):
        a = procedural_texture(SplitMix64(4), size=32)
        b = procedural_texture(SplitMix64(5), size=32)
        frames = dissolve_frames(a, b, SplitMix64(6))
        assert len(frames) == 16
        assert np.array_equal(frames[0], a)
        assert np.array_equal(frames[-1], b)

    def test_interior_not_pure_blend(self):
        a = procedural_texture(SplitMix64(4), size=32)
        b = procedural_texture(SplitMix64(5), size=32)
        frames = dissolve_frames(a, b, SplitMix64(6))
        alpha = 7 / 15
        pure = np.clip(np.rint((1 - alpha) * a.astype(float) + alpha * b.astype(float)), 0, 255)
        assert not np.array_equal(frames[7], pure.astype(np.uint8))

    def test_degenerate_stays_near_input(self):
        a = procedural_texture(SplitMix64(8), size=32)
        frames = dissolve_frames(a, a, SplitMix64(9), max_perturb=12.0)
        for frame in frames:
            delta = np.abs(frame.astype(int) - a.astype(int))
            assert delta.max() <= 13

    def test_direction_matters(self):
        a = procedural_texture(SplitMix64(4), size=32)
        b = procedural_texture(SplitMix64(5), size=32)
        forward = dissolve_frames(a, b, SplitMix64(6))
        backward = dissolve_frames(b, a, SplitMix64(6))
        assert not all(np.array_equal(f, g) for f, g in zip(forward, backward))
        assert not all(np.array_equal(f, g) for f, g in zip(forward, backward[::-1]))

    def test_mismatched_shapes_resized(self):
        a = procedural_texture(SplitMix64(4), size=32)
        b = procedural_texture(SplitMix64(5), size=48)
        frames = dissolve_frames(a, b, SplitMix64(6))
        assert all(f.shape == a.shape for f in frames)
