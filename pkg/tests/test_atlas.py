import random

import numpy as np
import pytest

from sonomap.atlas import (
    Atlas,
    MapBounds,
    PromptStages,
    atlas_from_dict,
    atlas_to_dict,
    build_atlas,
    canonical_json,
    highlight_for_term,
    highlight_for_texture,
    load_atlas,
    save_atlas,
    validate_atlas,
)
from sonomap.errors import AtlasValidationError
from sonomap.params import UmapParams

from conftest import make_dataset_records

PARAMS = UmapParams(n_neighbors=5, n_epochs=50, seed=5)


@pytest.fixture(scope="module")
def fixture_atlas():
    terms, textures, image_embeddings, text_embeddings = make_dataset_records()
    return build_atlas(terms, textures, image_embeddings, text_embeddings, PARAMS)


class TestBuildAtlas:
    def test_counts_and_coords(self, fixture_atlas):
        atlas = fixture_atlas
        assert len(atlas.terms) == 10
        assert len(atlas.textures) == 20
        assert atlas.text_model.n_points == 10
        assert atlas.image_model.n_points == 20
        for i, t in enumerate(atlas.terms):
            assert t.coord == (
                float(atlas.text_model.coords[i, 0]),
                float(atlas.text_model.coords[i, 1]),
            )

    def test_bounds_tight_and_containing(self, fixture_atlas):
        atlas = fixture_atlas
        for name, model in (("image", atlas.image_model), ("text", atlas.text_model)):
            bounds = atlas.bounds[name]
            assert bounds == MapBounds.of(model.coords)
            for row in model.coords:
                assert bounds.contains(row)

    def test_orphan_texture_rejected(self):
        terms, textures, image_embeddings, text_embeddings = make_dataset_records()
        textures[3].term_id = "term-9999"
        with pytest.raises(AtlasValidationError, match="orphan texture"):
            build_atlas(terms, textures, image_embeddings, text_embeddings, PARAMS)

    def test_over_owned_term_rejected(self):
        terms, textures, image_embeddings, text_embeddings = make_dataset_records()
        # move both of term-0001's textures onto term-0000 -> 4 and 0
        for x in textures:
            if x.term_id == "term-0001":
                x.term_id = "term-0000"
        with pytest.raises(AtlasValidationError, match="expected 1-3"):
            build_atlas(terms, textures, image_embeddings, text_embeddings, PARAMS)

    def test_missing_embedding_named(self):
        terms, textures, image_embeddings, text_embeddings = make_dataset_records()
        dropped = textures[0].image_embedding_id
        del image_embeddings[dropped]
        with pytest.raises(AtlasValidationError, match=dropped):
            build_atlas(terms, textures, image_embeddings, text_embeddings, PARAMS)

    def test_duplicate_texture_id_rejected(self):
        terms, textures, image_embeddings, text_embeddings = make_dataset_records()
        textures[1].texture_id = textures[0].texture_id
        with pytest.raises(AtlasValidationError, match="duplicate texture_id"):
            build_atlas(terms, textures, image_embeddings, text_embeddings, PARAMS)

    def test_input_order_does_not_matter(self):
        one = make_dataset_records()
        two = make_dataset_records()
        shuffled_terms = list(two[0])
        shuffled_textures = list(two[1])
        random.Random(0).shuffle(shuffled_terms)
        random.Random(1).shuffle(shuffled_textures)
        a = build_atlas(one[0], one[1], one[2], one[3], PARAMS)
        b = build_atlas(shuffled_terms, shuffled_textures, two[2], two[3], PARAMS)
        assert canonical_json(atlas_to_dict(a)) == canonical_json(atlas_to_dict(b))


class TestHighlighting:
    def test_term_owns_ordered_textures(self, fixture_atlas):
        assert highlight_for_term(fixture_atlas, "term-0001") == [
            "tex-0001-0",
            "tex-0001-1",
        ]

    def test_texture_owned_by_single_term(self, fixture_atlas):
        assert highlight_for_texture(fixture_atlas, "tex-0001-0") == "term-0001"

    def test_round_trip_for_every_texture(self, fixture_atlas):
        for x in fixture_atlas.textures:
            term = highlight_for_texture(fixture_atlas, x.texture_id)
            assert x.texture_id in highlight_for_term(fixture_atlas, term)

    def test_ownership_partitions_texture_set(self, fixture_atlas):
        total = sum(
            len(highlight_for_term(fixture_atlas, t.term_id)) for t in fixture_atlas.terms
        )
        assert total == len(fixture_atlas.textures)

    def test_lengths_in_one_to_three(self, fixture_atlas):
        for t in fixture_atlas.terms:
            assert 1 <= len(highlight_for_term(fixture_atlas, t.term_id)) <= 3

    def test_unknown_ids_raise(self, fixture_atlas):
        with pytest.raises(KeyError, match="unknown term"):
            highlight_for_term(fixture_atlas, "term-xxxx")
        with pytest.raises(KeyError, match="unknown texture"):
            highlight_for_texture(fixture_atlas, "replot-0000")


class TestSerialization:
    def test_save_load_round_trip(self, fixture_atlas, tmp_path):
        path = tmp_path / "atlas.json"
        save_atlas(fixture_atlas, path)
        loaded = load_atlas(path)
        assert atlas_to_dict(loaded) == atlas_to_dict(fixture_atlas)
        assert np.array_equal(loaded.image_model.coords, fixture_atlas.image_model.coords)

    def test_double_save_byte_stable(self, fixture_atlas, tmp_path):
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        save_atlas(fixture_atlas, first)
        save_atlas(load_atlas(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_load_rejects_over_ownership(self, fixture_atlas, tmp_path):
        doc = atlas_to_dict(fixture_atlas)
        victim = doc["textures"][2]["term_id"]
        for entry in doc["textures"]:
            if entry["term_id"] == "term-0001":
                entry["term_id"] = victim if victim != "term-0001" else "term-0000"
        path = tmp_path / "corrupt.json"
        path.write_text(canonical_json(doc))
        with pytest.raises(AtlasValidationError, match="expected 1-3"):
            load_atlas(path)

    def test_load_rejects_coord_drift(self, fixture_atlas, tmp_path):
        doc = atlas_to_dict(fixture_atlas)
        doc["terms"][0]["coord"][0] += 0.5
        path = tmp_path / "drift.json"
        path.write_text(canonical_json(doc))
        with pytest.raises(AtlasValidationError, match="coord differs"):
            load_atlas(path)

    def test_load_rejects_untight_bounds(self, fixture_atlas, tmp_path):
        doc = atlas_to_dict(fixture_atlas)
        doc["bounds"]["image"]["max_x"] += 1.0
        path = tmp_path / "bounds.json"
        path.write_text(canonical_json(doc))
        with pytest.raises(AtlasValidationError, match="tight"):
            load_atlas(path)

    def test_malformed_document(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 1}')
        with pytest.raises(AtlasValidationError, match="malformed"):
            load_atlas(path)

    def test_canonical_json_shape(self):
        text = canonical_json({"b": 1.5, "a": [1.0, 2.25]})
        assert text == '{"a":[1.0,2.25],"b":1.5}\n'


class TestPromptStages:
    def test_empty_stage_rejected(self):
        with pytest.raises(AtlasValidationError, match="non-empty"):
            PromptStages(material="", physical_qualities="q", english_description="d", image_prompt="p")

    def test_round_trip(self):
        stages = PromptStages("m", "q", "d", "p")
        assert PromptStages.from_dict(stages.to_dict()) == stages


def test_validate_rejects_crossed_models(fixture_atlas):
    swapped = Atlas(
        version=fixture_atlas.version,
        params=fixture_atlas.params,
        terms=fixture_atlas.terms,
        textures=fixture_atlas.textures,
        image_model=fixture_atlas.text_model,
        text_model=fixture_atlas.image_model,
        dynamic_points=[],
        bounds=fixture_atlas.bounds,
    )
    with pytest.raises(AtlasValidationError):
        validate_atlas(swapped)
