"""Command-line front door: build, validate, replot-sim, serve, mockgen.

Exit codes: 0 ok, 1 validation failure, 2 I/O or parse failure, 3 provider
failure.  With --json every report is one machine-parseable JSON object on
stdout; errors always go to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from .atlas import (
    TermRecord,
    TextureRecord,
    PromptStages,
    build_atlas,
    canonical_json,
    load_atlas,
    save_atlas,
)
from .errors import AtlasValidationError, ProviderError, SonomapError
from .metrics import trustworthiness
from .mockdata import generate_dataset, simulation_frame
from .params import UmapParams
from .projection import MODALITY_DIMS, EmbeddingVector
from .providers import MockPromptStager, MockSeedConfig, mock_provider_set
from .replot import replot_frame

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_PROVIDER = 3


def load_embedding_file(path: Path, modality: str) -> dict[str, EmbeddingVector]:
    dim = MODALITY_DIMS[modality]
    table: dict[str, EmbeddingVector] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            vec = EmbeddingVector(rec["id"], modality, np.asarray(rec["vector"], dtype=np.float32))
            table[vec.id] = vec.check_dim(dim)
    return table


def load_manifest(path: Path) -> dict:
    manifest = json.loads(path.read_text())
    base = path.parent
    resolved = dict(manifest)
    for key in ("terms_path", "ownership_path", "image_embeddings_path", "text_embeddings_path"):
        resolved[key] = base / manifest[key]
    resolved["output_path"] = base / manifest.get("output_path", "atlas.json")
    return resolved


def load_term_records(path: Path, seed: int) -> list[TermRecord]:
    """Terms file entries; entries without pre-authored stages get mock-staged."""
    stager = MockPromptStager(MockSeedConfig(seed=seed))
    terms = []
    for entry in json.loads(path.read_text()):
        stages = entry.get("stages")
        terms.append(
            TermRecord(
                term_id=entry["term_id"],
                surface=entry["surface"],
                stages=PromptStages.from_dict(stages)
                if stages
                else stager.stage_prompts(entry["surface"]),
                text_embedding_id=entry["text_embedding_id"],
            )
        )
    return terms


def load_texture_records(path: Path) -> list[TextureRecord]:
    return [
        TextureRecord(
            texture_id=entry["texture_id"],
            term_id=entry["term_id"],
            image_path=entry["image_path"],
            thumbnail_path=entry["thumbnail_path"],
            image_embedding_id=entry["image_embedding_id"],
        )
        for entry in json.loads(path.read_text())
    ]


def emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")


def cmd_build(args) -> int:
    manifest = load_manifest(Path(args.manifest))
    params_dict = dict(manifest.get("params", {}))
    if args.seed is not None:
        params_dict["seed"] = args.seed
    if args.n_neighbors is not None:
        params_dict["n_neighbors"] = args.n_neighbors
    if args.min_dist is not None:
        params_dict["min_dist"] = args.min_dist
    if args.metric is not None:
        params_dict["metric"] = args.metric
    params = UmapParams(**params_dict)

    terms = load_term_records(manifest["terms_path"], params.seed)
    textures = load_texture_records(manifest["ownership_path"])
    image_embeddings = load_embedding_file(manifest["image_embeddings_path"], "image")
    text_embeddings = load_embedding_file(manifest["text_embeddings_path"], "text")

    start = time.perf_counter()
    atlas = build_atlas(terms, textures, image_embeddings, text_embeddings, params)
    wall_s = time.perf_counter() - start

    output = Path(args.output) if args.output else manifest["output_path"]
    save_atlas(atlas, output)

    def map_quality(model) -> float:
        # k=15 at the published scale; clamped for tiny fixtures
        k = min(15, max(1, model.n_points // 2 - 1))
        return round(trustworthiness(model.vectors, model.coords, k, params.metric), 6)

    report = {
        "output": str(output),
        "terms": len(atlas.terms),
        "textures": len(atlas.textures),
        "trustworthiness_image": map_quality(atlas.image_model),
        "trustworthiness_text": map_quality(atlas.text_model),
        "wall_time_s": round(wall_s, 3),
        "seed": params.seed,
    }
    emit(report, args.json)
    return EXIT_OK


def cmd_validate(args) -> int:
    atlas = load_atlas(args.atlas)
    emit(
        {
            "valid": True,
            "terms": len(atlas.terms),
            "textures": len(atlas.textures),
            "dynamic_points": len(atlas.dynamic_points),
        },
        args.json,
    )
    return EXIT_OK


def cmd_replot_sim(args) -> int:
    atlas = load_atlas(args.atlas)
    seed = args.seed if args.seed is not None else atlas.params.seed
    providers = mock_provider_set(MockSeedConfig(seed=seed))
    records = []
    for i in range(args.frames):
        frame = simulation_frame(seed, i)
        records.append(replot_frame(atlas, providers, frame, job_id="sim", frame_index=i))

    digest = hashlib.sha256(
        canonical_json([r.to_dict() for r in records]).encode("utf-8")
    ).hexdigest()
    report: dict = {"frames": args.frames, "determinism_hash": digest, "seed": seed}
    for name, getter in (("image", lambda r: r.image_coord), ("text", lambda r: r.text_coord)):
        bounds = atlas.bounds[name]
        coords = [getter(r) for r in records]
        report[f"{name}_all_finite"] = bool(np.all(np.isfinite(coords))) if coords else True
        report[f"{name}_within_expanded_bounds"] = all(
            bounds.contains(c, expand=0.25) for c in coords
        )
    emit(report, args.json)
    return EXIT_OK


def cmd_mockgen(args) -> int:
    generate_dataset(args.out_dir, n_terms=args.terms, n_textures=args.textures, seed=args.seed or 0)
    emit(
        {
            "out_dir": args.out_dir,
            "terms": args.terms,
            "textures": args.textures,
            "manifest": str(Path(args.out_dir) / "manifest.json"),
        },
        args.json,
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import ServiceConfig, run_service

    config = ServiceConfig.load(args.config)
    if args.data_dir:
        config.data_dir = args.data_dir
    if args.seed is not None:
        config.seed = args.seed
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    run_service(config)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sonomap", description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit machine-parseable reports")
    parser.add_argument("--seed", type=int, default=None, help="seed override")
    parser.add_argument("--data-dir", default=None, help="service data directory")
    sub = parser.add_subparsers(dest="command", required=True)

    def global_flags(p):
        # Accepted after the subcommand too; SUPPRESS keeps the top-level
        # value when the flag is absent at this position.
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        p.add_argument("--data-dir", default=argparse.SUPPRESS)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p_build = sub.add_parser("build", help="build an atlas from a manifest")
    p_build.add_argument("manifest")
    p_build.add_argument("--n-neighbors", type=int, default=None)
    p_build.add_argument("--min-dist", type=float, default=None)
    p_build.add_argument("--metric", choices=["cosine", "euclidean"], default=None)
    p_build.add_argument("--output", default=None)
    global_flags(p_build)
    p_build.set_defaults(func=cmd_build)

    p_validate = sub.add_parser("validate", help="validate an atlas document")
    p_validate.add_argument("atlas")
    global_flags(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_sim = sub.add_parser("replot-sim", help="headless replot pipeline exercise")
    p_sim.add_argument("atlas")
    p_sim.add_argument("--frames", type=int, default=10)
    global_flags(p_sim)
    p_sim.set_defaults(func=cmd_replot_sim)

    p_mock = sub.add_parser("mockgen", help="fabricate a mock dataset + manifest")
    p_mock.add_argument("out_dir")
    p_mock.add_argument("--terms", type=int, default=235)
    p_mock.add_argument("--textures", type=int, default=676)
    global_flags(p_mock)
    p_mock.set_defaults(func=cmd_mockgen)

    p_serve = sub.add_parser("serve", help="run the exploration service")
    p_serve.add_argument("--config", default=None)
    p_serve.add_argument("--host", default=None)
    p_serve.add_argument("--port", type=int, default=None)
    global_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AtlasValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, IndexError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SonomapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
