import shutil

import numpy as np
import pytest

from sonomap.atlas import TermRecord, TextureRecord
from sonomap.projection import MODALITY_DIMS, EmbeddingVector
from sonomap.providers import MockPromptStager, MockSeedConfig
from sonomap.rng import stream_for


def gaussian_clusters(seed: int = 7, n_per: int = 100, dim: int = 50) -> np.ndarray:
    """Three well-separated Gaussian clusters with low intrinsic dimension.

    Means sit on distinct axes (so both metrics separate them); variance is
    concentrated in two directions, which is what makes near-perfect 2D
    neighborhood preservation possible at all.
    """
    rng = np.random.default_rng(seed)
    means = np.zeros((3, dim))
    means[0, 0] = 12.0
    means[1, 1] = 12.0
    means[2, 2] = 12.0
    stds = np.full(dim, 0.05)
    stds[3] = 1.5
    stds[4] = 1.5
    parts = [rng.normal(means[c], stds, size=(n_per, dim)) for c in range(3)]
    return np.vstack(parts).astype(np.float32)


@pytest.fixture(scope="session")
def cluster_data() -> np.ndarray:
    return gaussian_clusters()


@pytest.fixture(scope="session")
def cluster_labels() -> np.ndarray:
    return np.repeat(np.arange(3), 100)


def unit_vector(modality: str, key: str, seed: int = 5) -> np.ndarray:
    stream = stream_for(seed, "fixture-embedding", modality, key)
    v = stream.uniform_array(MODALITY_DIMS[modality]) * 2.0 - 1.0
    return (v / np.linalg.norm(v)).astype(np.float32)


def make_dataset_records(n_terms: int = 10, per_term: int = 2, seed: int = 5):
    """In-memory terms/textures/embeddings for atlas unit tests."""
    stager = MockPromptStager(MockSeedConfig(seed=seed))
    terms, textures = [], []
    image_embeddings, text_embeddings = {}, {}
    for i in range(n_terms):
        term_id = f"term-{i:04d}"
        surface = f"Mimetic{i:02d}"
        text_id = f"emb-txt-{term_id}"
        terms.append(
            TermRecord(
                term_id=term_id,
                surface=surface,
                stages=stager.stage_prompts(surface),
                text_embedding_id=text_id,
            )
        )
        text_embeddings[text_id] = EmbeddingVector(text_id, "text", unit_vector("text", text_id, seed))
        for j in range(per_term):
            texture_id = f"tex-{i:04d}-{j}"
            image_id = f"emb-img-{texture_id}"
            textures.append(
                TextureRecord(
                    texture_id=texture_id,
                    term_id=term_id,
                    image_path=f"images/{texture_id}.png",
                    thumbnail_path=f"thumbs/{texture_id}.png",
                    image_embedding_id=image_id,
                )
            )
            image_embeddings[image_id] = EmbeddingVector(
                image_id, "image", unit_vector("image", image_id, seed)
            )
    return terms, textures, image_embeddings, text_embeddings


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """A built mock dataset + atlas on disk, shared read-only across tests."""
    from sonomap.cli import main

    dataset_dir = tmp_path_factory.mktemp("dataset")
    assert main(["--seed", "7", "mockgen", str(dataset_dir), "--terms", "20", "--textures", "55"]) == 0
    assert main(["build", str(dataset_dir / "manifest.json"), "--n-neighbors", "5"]) == 0
    return dataset_dir


@pytest.fixture()
def service_dir(small_dataset, tmp_path):
    """Private mutable copy of the built dataset for service tests."""
    dst = tmp_path / "data"
    shutil.copytree(small_dataset, dst)
    return dst
