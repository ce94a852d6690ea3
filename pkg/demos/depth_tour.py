"""A tour of the depth notions on one small sample.

Run: python3 demos/depth_tour.py
"""
import numpy as np

from depthkit import depth
from depthkit.api import NOTIONS

rng = np.random.default_rng(7)
X = rng.standard_normal((60, 2))
queries = {"center": np.zeros(2), "shoulder": np.array([1.0, 0.5]), "outside": np.array([4.0, -3.0])}

print(f"{'notion':<12}" + "".join(f"{name:>11}" for name in queries))
for notion in NOTIONS:
    if notion == "lens-ordinal":
        continue  # needs a dissimilarity matrix, not coordinates
    method = "approx" if notion == "projection" else "exact"
    vals = [depth(q, X, notion, method, k=2000, seed=1).value for q in queries.values()]
    print(f"{notion:<12}" + "".join(f"{v:11.4f}" for v in vals))

# halfspace, simplicial, zonoid and onion depth vanish outside the hull;
# the others only decay. Random Tukey depth never undercuts the exact value.
y = queries["shoulder"]
print("\nhalfspace exact", depth(y, X).value, "random Tukey, k=50:", depth(y, X, method="approx", k=50).value)

# whitening buys affine invariance for the distance-based notions
A = np.array([[3.0, 1.0], [0.0, 0.3]])
for whiten in (None, "cov"):
    a = depth(y, X, "spatial", whiten=whiten).value
    b = depth(A @ y, X @ A.T, "spatial", whiten=whiten).value
    print(f"spatial whiten={whiten}: {a:.6f} before, {b:.6f} after a shear")
