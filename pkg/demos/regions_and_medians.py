"""Tukey regions, probability-content regions, onion layers and medians.

Run: python3 demos/regions_and_medians.py
"""
import numpy as np

from depthkit.regions import (
    depth_median,
    onion_layers,
    prob_central_region,
    spatial_median,
    tukey_region_2d,
)

rng = np.random.default_rng(3)
X = rng.standard_normal((80, 2)) @ np.array([[1.5, 0.0], [0.8, 0.6]])

for alpha in (0.05, 0.15, 0.3, 0.45):
    r = tukey_region_2d(X, alpha)
    if r.is_empty:
        print(f"alpha={alpha:.2f}: empty")
        continue
    v = r.vertices
    area = 0.5 * abs(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
    print(f"alpha={alpha:.2f}: {len(v):2d} vertices, area {area:.3f}")

r = prob_central_region(X, "halfspace", 0.5)
print(f"\ncentral half of the sample: {r.members.size} points at depth >= {r.alpha:.4f}")

layers = onion_layers(X)
print("onion layer sizes:", [len(l.members) for l in layers])

for notion in ("halfspace", "simplicial", "zonoid"):
    m = depth_median(X, notion)
    print(f"{notion:<10} median {np.round(m.point, 3)} depth {m.value:.4f}")
s = spatial_median(X)
print(f"spatial    median {np.round(s.point, 3)} after {s.iterations} iterations")
