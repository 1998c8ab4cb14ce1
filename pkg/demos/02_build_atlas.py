"""Fabricate a mock dataset, build the two-map atlas, and read the
authored cross-modal links.

Run:  python demos/02_build_atlas.py [data_dir]
"""

import sys
import tempfile
from pathlib import Path

from sonomap.atlas import highlight_for_term, highlight_for_texture, load_atlas
from sonomap.cli import main

data_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="sonomap-"))
print(f"dataset directory: {data_dir}\n")

# A scaled-down corpus (the full published shape is --terms 235 --textures 676).
assert main(["--seed", "11", "mockgen", str(data_dir), "--terms", "40", "--textures", "112"]) == 0
print()

# Build both maps from the manifest; the report includes per-map
# trustworthiness and wall time. Same seed -> byte-identical atlas.
assert main(["--json", "build", str(data_dir / "manifest.json"), "--n-neighbors", "8"]) == 0
print()
assert main(["validate", str(data_dir / "atlas.json")]) == 0
print()

atlas = load_atlas(data_dir / "atlas.json")
term = atlas.terms[0]
print(f"term {term.term_id} ({term.surface!r})")
print(f"  description: {term.stages.english_description}")
print(f"  map position: ({term.coord[0]:.3f}, {term.coord[1]:.3f})")

owned = highlight_for_term(atlas, term.term_id)
print(f"  highlights {len(owned)} texture(s): {owned}")
for texture_id in owned:
    back = highlight_for_texture(atlas, texture_id)
    print(f"  {texture_id} -> owned by {back}")

sizes = sorted({len(highlight_for_term(atlas, t.term_id)) for t in atlas.terms})
print(f"\nownership sizes present in this corpus: {sizes} (generation failures give 2)")
