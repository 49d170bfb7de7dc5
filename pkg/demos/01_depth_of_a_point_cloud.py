"""
Depth of a point cloud
======================

Before going anywhere near networks, look at what the depth does to an
ordinary sample in the plane. Every point gets the smallest share of the
sample that sits on one side of a line through it, after the cloud has been
whitened by its own covariance. Central points score high, the rim scores
low, and stretching or rotating the cloud changes nothing.
"""
import numpy as np

from netdepth import depth_contour_2d, depth_space, ptd_point, scatter

rng = np.random.default_rng(0)

# an elongated, tilted Gaussian cloud
n = 60
x = rng.standard_normal((n, 2)) @ np.array([[3.0, 0.0], [1.2, 0.6]])
ds = depth_space(x)
print("depth values are multiples of 1/n:", sorted(set(ds.counts.tolist()))[:6], "...")
print("deepest point(s):", ds.median(), "depth", ds.values.max())

###############################################################################
# The median is the deepest sample point. Compare it with the coordinate mean.

med = x[ds.median()[0]]
print("median", np.round(med, 3), " mean", np.round(x.mean(axis=0), 3))

###############################################################################
# Depth is affine invariant: an arbitrary invertible map followed by a shift
# leaves every count where it was.

a = np.array([[0.2, -1.5], [2.0, 0.7]])
print("same counts after an affine map:",
      np.array_equal(ds.counts, depth_space(x @ a.T + [10, -4]).counts))

###############################################################################
# Points outside the sample can be scored against it too. Walking away from
# the centre the depth drops to zero.

sc = scatter(x)
u = np.array([0.6, 0.8])
sd = np.sqrt(u @ np.cov(x.T) @ u)
for r in (0, 0.5, 1, 2, 4):
    q = x.mean(axis=0) + r * sd * u
    print(f"  {r} sd out: depth {ptd_point(q, sc):.3f}")

###############################################################################
# Depth regions are the deepest fractions of the sample. Their convex hulls
# are the empirical contours.

for alpha in (0.5, 0.8, 0.95):
    c = depth_contour_2d(x, ds, alpha)
    print(f"  alpha={alpha}: {len(c.members)} points inside, hull of {len(c.vertices)} vertices")
