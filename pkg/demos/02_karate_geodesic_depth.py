"""
Who is at the centre of the karate club?
========================================

Zachary's karate club: 34 members, 78 friendships, and a club that split in
two around the instructor (node 1, "Mr. Hi") and the administrator (node 34,
"John A."). Here the shortest-path distances between members are embedded
in a few dimensions and each member gets the depth of their point.
"""
from netdepth import MetricSpec, classical_mds, compute_distance, depth_space, load_karate
from netdepth.centrality import compute

g = load_karate()
d = compute_distance(g, MetricSpec("sp"))
print(f"{g.n_nodes} nodes, {g.n_edges} edges, diameter {d.values.max():g}")

###############################################################################
# Classical scaling gives a nested family of embeddings. How much of the
# geometry do the first few axes hold, and who is deepest in each?

for p in range(2, 9):
    e = classical_mds(d, p)
    ds = depth_space(e.config, g.labels)
    top = [g.labels[i] for i in ds.median()]
    print(f"p={p}: explained {e.explained_variance:.3f}, stress-1 {e.stress1:.3f}, "
          f"median {top}, depth {ds.values.max():.3f}")

###############################################################################
# The deepest node is Mr. Hi throughout. The 0.9 region (the deepest tenth or
# so) is a small core around him.

ds = depth_space(classical_mds(d, 4).config, g.labels)
print("R(0.9) at p=4:", ds.region(0.9).labels)

###############################################################################
# Compare with the usual suspects. Depth is not just another degree count:
# it rewards being in the middle of the geometry, not having many ties.

for m in ("degree", "closeness", "betweenness"):
    v = compute(g, m).values
    order = v.argsort()[::-1][:4]
    print(f"top {m:<12}", [g.labels[i] for i in order])
order = ds.values.argsort(kind="stable")[::-1][:4]
print("top depth       ", [g.labels[i] for i in order])
