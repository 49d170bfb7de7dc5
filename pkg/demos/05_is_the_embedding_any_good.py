"""
Is the embedding any good?
==========================

Depth is only as meaningful as the embedding it is computed in. Two checks:
a scree of stress-1 against dimension, and a permutation test asking whether
the fit beats what shuffled distances would give.
"""
from netdepth import MetricSpec, compute_distance, load_karate, permutation_test_stress, smacof

g = load_karate()
d = compute_distance(g, MetricSpec("diffusion"), 3.0)

for p in range(1, 8):
    e = smacof(d, p)
    print(f"p={p}  stress-1 {e.stress1:.4f}  iterations {e.iterations}")

###############################################################################
# Shuffle the off-diagonal distances and refit. If the real distances are no
# easier to embed than noise, the depth pattern is not worth reading.

res = permutation_test_stress(d, 3, n_perm=49, seed=1)
print(f"observed stress-1 {res.observed:.4f}, null range "
      f"[{res.null.min():.4f}, {res.null.max():.4f}], p = {res.p_value:.3f}")
