"""Provider interfaces for every generative capability, with seeded mocks.

Each role the system needs from a hosted model (prompt staging, texture
generation, texture application, video interpolation, frame analysis,
concept description, text/image embedding) is a small object with ``name``
and ``deterministic`` attributes.  The mock implementations shipped here are
pure functions of (MockSeedConfig, inputs): repeated calls are byte-identical,
which is what makes the whole system testable offline.

Live vendor adapters would implement the same call signatures and be selected
through configuration; they are deliberately out of scope here.
"""

from __future__ import annotations

import concurrent.futures
import threading
from dataclasses import dataclass

import numpy as np

from .atlas import PromptStages
from .errors import ProviderError, ProviderTimeoutError
from .rng import hash64, stream_for
from . import rasters

DEFAULT_TIMEOUT_S = 30.0
FRAME_COUNT = 16
FAILURE_MODULUS = 7  # texture index 2 is dropped when hash % 7 == 0

DEFAULT_SYLLABLES = (
    "fu", "wa", "mo", "ko", "pu", "ri", "sa", "ra", "gi", "za", "to", "ro",
    "nyo", "po", "chi", "ku", "me", "yu", "ho", "ne", "bi", "do", "ka", "shi",
)

_MATERIALS = (
    "mossy felt", "rippled glass", "spun sugar", "wet clay", "brushed brass",
    "frosted bark", "pressed kelp", "woven mist", "cracked enamel", "dewy foam",
    "carded wool", "sintered sand", "lacquered paper", "pebbled hide", "drifted ash",
    "plaited reed",
)
_QUALITIES = (
    "springy", "granular", "silken", "crumbly", "billowing", "prickly",
    "gelatinous", "feathery", "viscous", "crinkled", "velvety", "effervescent",
    "fibrous", "glassy", "spongy", "downy",
)


@dataclass(frozen=True)
class MockSeedConfig:
    """Everything that parameterizes the mock providers."""

    seed: int = 0
    image_dim: int = 512
    text_dim: int = 1536
    syllables: tuple[str, ...] = DEFAULT_SYLLABLES

    def __post_init__(self):
        if len(self.syllables) < 4:
            raise ValueError("syllable inventory too small for surface generation")


class MockProvider:
    deterministic = True
    name = "mock"

    def __init__(self, config: MockSeedConfig | None = None):
        self.config = config or MockSeedConfig()

    def _stream(self, *context):
        return stream_for(self.config.seed, self.name, *context)


class MockPromptStager(MockProvider):
    """Stages a surface into the four-step prompt chain via templated picks."""

    name = "stage_prompts"

    def stage_prompts(self, surface: str) -> PromptStages:
        if not surface:
            raise ProviderError(self.name, "empty surface")
        s = self._stream(surface)
        material = _MATERIALS[s.below(len(_MATERIALS))]
        quality = _QUALITIES[s.below(len(_QUALITIES))]
        quality_2 = _QUALITIES[s.below(len(_QUALITIES))]
        description = (
            f"A {quality} {material} surface that evokes the sound '{surface}'"
        )
        return PromptStages(
            material=material,
            physical_qualities=f"{quality}, {quality_2}",
            english_description=description,
            image_prompt=f"{description}, studio macro photograph, rich tactile detail",
        )


class MockTextureGenerator(MockProvider):
    """Procedural noise rasters keyed by the prompt text and variation index.

    Simulates occasional generation failure by dropping index 2 whenever
    hash64(image_prompt) % 7 == 0, reproducing terms with fewer than three
    textures.
    """

    name = "generate_textures"

    def failure_hash(self, stages: PromptStages) -> bool:
        return hash64(stages.image_prompt) % FAILURE_MODULUS == 0

    def generate_textures(self, stages: PromptStages, count: int) -> list[bytes]:
        if not 1 <= count <= 3:
            raise ProviderError(self.name, f"count {count} outside [1, 3]")
        drops_third = self.failure_hash(stages)
        images = []
        for index in range(count):
            if index == 2 and drops_third:
                continue
            stream = self._stream(stages.image_prompt, index)
            images.append(rasters.encode_png(rasters.procedural_texture(stream)))
        if not images:
            raise ProviderError(self.name, "no textures generated")
        return images


class MockTextureApplier(MockProvider):
    """Tiles the texture over the object raster and blends 50/50."""

    name = "apply_texture"

    def apply_texture(self, object_image: bytes, texture_image: bytes) -> bytes:
        try:
            obj = rasters.decode_rgb(object_image)
            tex = rasters.decode_rgb(texture_image)
        except ValueError as exc:
            raise ProviderError(self.name, str(exc)) from exc
        return rasters.encode_png(rasters.blend_half(obj, tex))


class MockVideoInterpolator(MockProvider):
    """One-way A->B dissolve with seeded perturbation; 16 frames."""

    name = "interpolate_video"

    def interpolate_video(self, image_a: bytes, image_b: bytes) -> list[bytes]:
        try:
            a = rasters.decode_rgb(image_a)
            b = rasters.decode_rgb(image_b)
        except ValueError as exc:
            raise ProviderError(self.name, str(exc)) from exc
        stream = self._stream(rasters.pixel_hash(a), rasters.pixel_hash(b))
        frames = rasters.dissolve_frames(a, b, stream, count=FRAME_COUNT)
        return [rasters.encode_png(f) for f in frames]


class MockFrameAnalyzer(MockProvider):
    """Invents a reduplicated mimetic surface from frame content."""

    name = "analyze_frame"

    def analyze_frame(self, frame: bytes) -> str:
        try:
            pixels = rasters.decode_rgb(frame)
        except ValueError as exc:
            raise ProviderError(self.name, str(exc)) from exc
        s = self._stream(rasters.pixel_hash(pixels))
        inventory = self.config.syllables
        first = inventory[s.below(len(inventory))]
        second = inventory[s.below(len(inventory))]
        core = first + second
        if s.below(2) == 1:
            core += inventory[s.below(len(inventory))]
        surface = core + core
        return surface[0].upper() + surface[1:]


class MockConceptDescriber(MockProvider):
    """Expands a surface into the description that gets text-embedded."""

    name = "describe_concept"

    def describe_concept(self, surface: str) -> str:
        if not surface:
            raise ProviderError(self.name, "empty surface")
        s = self._stream(surface)
        quality = _QUALITIES[s.below(len(_QUALITIES))]
        material = _MATERIALS[s.below(len(_MATERIALS))]
        return (
            f"'{surface}' names a {quality} impression, like {material} "
            f"shifting under slow light"
        )


def _unit_vector(stream, dim: int) -> np.ndarray:
    v = stream.uniform_array(dim) * 2.0 - 1.0
    return (v / np.linalg.norm(v)).astype(np.float32)


class MockTextEmbedder(MockProvider):
    name = "embed_text"

    def embed_text(self, text: str) -> np.ndarray:
        if not text:
            raise ProviderError(self.name, "empty text")
        return _unit_vector(self._stream(text), self.config.text_dim)


class MockImageEmbedder(MockProvider):
    """Keyed by decoded pixel content: pixel-identical images embed identically."""

    name = "embed_image"

    def embed_image(self, image: bytes) -> np.ndarray:
        try:
            pixels = rasters.decode_rgb(image)
        except ValueError as exc:
            raise ProviderError(self.name, str(exc)) from exc
        return _unit_vector(self._stream(rasters.pixel_hash(pixels)), self.config.image_dim)


@dataclass
class ProviderSet:
    """The complete provider roster the service needs to start."""

    prompt_stager: MockPromptStager
    texture_generator: MockTextureGenerator
    texture_applier: MockTextureApplier
    video_interpolator: MockVideoInterpolator
    frame_analyzer: MockFrameAnalyzer
    concept_describer: MockConceptDescriber
    text_embedder: MockTextEmbedder
    image_embedder: MockImageEmbedder
    timeout_s: float = DEFAULT_TIMEOUT_S

    def roster(self) -> list:
        return [
            self.prompt_stager,
            self.texture_generator,
            self.texture_applier,
            self.video_interpolator,
            self.frame_analyzer,
            self.concept_describer,
            self.text_embedder,
            self.image_embedder,
        ]

    def validate(self) -> None:
        for provider in self.roster():
            if provider is None:
                raise ProviderError("provider_set", "incomplete provider set")
            for attr in ("name", "deterministic"):
                if not hasattr(provider, attr):
                    raise ProviderError(
                        "provider_set", f"provider missing {attr!r} declaration"
                    )


def mock_provider_set(config: MockSeedConfig | None = None, timeout_s: float = DEFAULT_TIMEOUT_S) -> ProviderSet:
    config = config or MockSeedConfig()
    return ProviderSet(
        prompt_stager=MockPromptStager(config),
        texture_generator=MockTextureGenerator(config),
        texture_applier=MockTextureApplier(config),
        video_interpolator=MockVideoInterpolator(config),
        frame_analyzer=MockFrameAnalyzer(config),
        concept_describer=MockConceptDescriber(config),
        text_embedder=MockTextEmbedder(config),
        image_embedder=MockImageEmbedder(config),
        timeout_s=timeout_s,
    )


_executor_lock = threading.Lock()
_executor: concurrent.futures.ThreadPoolExecutor | None = None


def _get_executor() -> concurrent.futures.ThreadPoolExecutor:
    global _executor
    with _executor_lock:
        if _executor is None:
            _executor = concurrent.futures.ThreadPoolExecutor(
                max_workers=8, thread_name_prefix="provider"
            )
        return _executor


def call_provider(provider, method: str, *args, timeout: float = DEFAULT_TIMEOUT_S):
    """Invoke one provider method with a hard timeout.

    Raises ProviderTimeoutError on expiry and wraps any unexpected exception
    into a ProviderError tagged with the provider name, so callers always see
    a typed, stage-attributable failure.
    """
    future = _get_executor().submit(getattr(provider, method), *args)
    try:
        return future.result(timeout=timeout)
    except concurrent.futures.TimeoutError:
        future.cancel()
        raise ProviderTimeoutError(provider.name, f"timed out after {timeout}s") from None
    except ProviderError:
        raise
    except Exception as exc:
        raise ProviderError(provider.name, str(exc)) from exc
