"""The emergent loop, headless: interpolate between two textures, extract a
frame, and re-embed it into both maps as an orange dynamic point.

Run:  python demos/03_emergent_loop.py
"""

import tempfile
from pathlib import Path

from sonomap.atlas import load_atlas
from sonomap.cli import main
from sonomap.providers import MockSeedConfig, mock_provider_set
from sonomap.replot import InterpolationJob, JobStatus, extract_frame, replot_frame

data_dir = Path(tempfile.mkdtemp(prefix="sonomap-"))
assert main(["--seed", "11", "mockgen", str(data_dir), "--terms", "40", "--textures", "112"]) == 0
assert main(["build", str(data_dir / "manifest.json"), "--n-neighbors", "8"]) == 0

atlas = load_atlas(data_dir / "atlas.json")
providers = mock_provider_set(MockSeedConfig(seed=11))

# Pick two textures and generate the one-way A->B interpolation video.
tex_a, tex_b = atlas.textures[0], atlas.textures[50]
print(f"interpolating {tex_a.texture_id} -> {tex_b.texture_id}")
job = InterpolationJob("job-demo", tex_a.texture_id, tex_b.texture_id)
job.transition(JobStatus.RUNNING)
job.frames = providers.video_interpolator.interpolate_video(
    (data_dir / tex_a.image_path).read_bytes(),
    (data_dir / tex_b.image_path).read_bytes(),
)
job.transition(JobStatus.DONE)
print(f"job done with {job.frame_count} frames")

# Extract a mid-sequence frame and run the 4-stage pipeline:
# analyze -> describe -> embed (image + text) -> transform into both maps.
frame = extract_frame(job, 8)
record = replot_frame(atlas, providers, frame, job.job_id, 8)
print(f"\nframe 8 became {record.replot_id}:")
print(f"  invented surface:  {record.surface}")
print(f"  description:       {record.description}")
print(f"  image-map coord:   ({record.image_coord[0]:.3f}, {record.image_coord[1]:.3f})")
print(f"  text-map coord:    ({record.text_coord[0]:.3f}, {record.text_coord[1]:.3f})")
print(f"  rendered as:       {record.display_color} (dynamic={record.dynamic})")

# The loop never retrains: static coordinates are untouched, and the same
# frame re-embeds to identical coordinates.
again = replot_frame(atlas, providers, frame, job.job_id, 8)
print(f"\nre-running the pipeline on the same frame: coords identical = "
      f"{record.image_coord == again.image_coord and record.text_coord == again.text_coord}")
print(f"dynamic points now in atlas: {len(atlas.dynamic_points)}")

# replot-sim does this at the command line, with a determinism hash:
assert main(["--json", "replot-sim", str(data_dir / "atlas.json"), "--frames", "5"]) == 0
