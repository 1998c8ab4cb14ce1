"""Fit a 2D map of clustered high-dimensional vectors, then place new
points into it without refitting.

Run:  python demos/01_projection_basics.py
"""

import numpy as np

from sonomap import UmapParams, trustworthiness, umap_fit, umap_transform

# Three separated clusters in 50 dimensions, variance concentrated in two
# directions so a faithful 2D layout exists.
rng = np.random.default_rng(7)
means = np.zeros((3, 50))
means[0, 0] = means[1, 1] = means[2, 2] = 12.0
stds = np.full(50, 0.05)
stds[3] = stds[4] = 1.5
data = np.vstack([rng.normal(m, stds, size=(100, 50)) for m in means]).astype(np.float32)

params = UmapParams(n_neighbors=15, min_dist=0.5, metric="cosine", seed=42)
model = umap_fit(data, params)
print(f"fitted {model.n_points} points from {model.dim}-d into 2D")
print(f"similarity curve: a={model.a:.4f}, b={model.b:.4f}")

quality = trustworthiness(data, model.coords, k=15, metric="cosine")
print(f"trustworthiness T(15) = {quality:.4f}")

# The same seed gives the same layout, bit for bit.
again = umap_fit(data, params)
print("refit bit-identical:", np.array_equal(model.coords, again.coords))

# Out-of-sample transform: held-out points land in their own cluster,
# a duplicated training vector lands (essentially) on its twin.
held_out = data[[10, 110, 210]]
placed = umap_transform(model, held_out)
for row, label in zip(placed, ("cluster 0", "cluster 1", "cluster 2")):
    centroids = [model.coords[i * 100:(i + 1) * 100].mean(axis=0) for i in range(3)]
    nearest = int(np.argmin([np.linalg.norm(row - c) for c in centroids]))
    print(f"held-out point from {label} -> nearest centroid: cluster {nearest}")

twin = umap_transform(model, data[0])[0]
print(f"duplicate of point 0 drifts {np.linalg.norm(twin - model.coords[0]):.4f} map units")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    colors = np.repeat(["#c44", "#4a4", "#46c"], 100)
    ax.scatter(model.coords[:, 0], model.coords[:, 1], s=8, c=colors)
    ax.scatter(placed[:, 0], placed[:, 1], s=80, marker="x", c="black")
    ax.set_title("fitted map (x = transformed held-out points)")
    fig.savefig("demo_projection.png", dpi=120)
    print("wrote demo_projection.png")
except ImportError:
    pass
