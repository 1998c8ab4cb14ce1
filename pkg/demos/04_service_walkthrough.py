"""A scripted tour of every service endpoint using an in-process client.

For a real deployment run `sonomap serve --data-dir DATA_DIR` and point the
frontend (or curl) at the same routes.

Run:  python demos/04_service_walkthrough.py
"""

import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from sonomap.cli import main
from sonomap.service import ServiceConfig, create_app

data_dir = Path(tempfile.mkdtemp(prefix="sonomap-"))
assert main(["--seed", "11", "mockgen", str(data_dir), "--terms", "40", "--textures", "112"]) == 0
assert main(["build", str(data_dir / "manifest.json"), "--n-neighbors", "8"]) == 0

client = TestClient(create_app(ServiceConfig(data_dir=str(data_dir), seed=11)))

atlas = client.get("/atlas").json()
print(f"GET /atlas -> {atlas['counts']}, bounds keys {list(atlas['bounds'])}")

term = atlas["terms"][3]
hl = client.get("/highlight", params={"kind": "term", "id": term["term_id"]}).json()
print(f"GET /highlight term {term['surface']!r} -> {hl['highlighted_ids']}")
texture_id = hl["highlighted_ids"][0]
back = client.get("/highlight", params={"kind": "texture", "id": texture_id}).json()
print(f"GET /highlight texture {texture_id} -> {back['highlighted_ids']}")

item = client.post("/gallery", json={"ref": texture_id}).json()
print(f"POST /gallery -> {item['item_id']} at position {item['position']}")

objects = client.get("/objects").json()["objects"]
print(f"GET /objects -> {[o['object_id'] for o in objects]}")
applied = client.post("/apply", json={"object_id": "vase", "ref": texture_id}).json()
print(f"POST /apply -> {applied['composite_image_path']} (cached={applied['cached']})")

partner = atlas["textures"][20]["texture_id"]
job_id = client.post("/interpolate", json={"texture_a": texture_id, "texture_b": partner}).json()["job_id"]
while True:
    status = client.get(f"/interpolate/{job_id}").json()
    if status["status"] in ("done", "failed"):
        break
    time.sleep(0.05)
print(f"POST /interpolate -> {job_id} finished {status['status']} with {status['frame_count']} frames")

record = client.post(f"/interpolate/{job_id}/replot", json={"frame_index": 9}).json()
print(f"POST .../replot frame 9 -> {record['replot_id']} "
      f"({record['surface']!r}, {record['display_color']})")

png = client.get(f"/files/{atlas['textures'][0]['thumbnail_path']}")
print(f"GET /files/<thumbnail> -> {png.status_code}, {len(png.content)} bytes")

print(f"\ndynamic points now served: {len(client.get('/atlas').json()['dynamic_points'])}")
print(f"data directory (inspect or `sonomap serve --data-dir` it): {data_dir}")
