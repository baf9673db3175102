"""Which typed triangles occur more than chance would suggest?

We plant homophily in a small-world graph: nodes are typed by position on the
ring, so neighbors mostly share a type. The typed triangle census is compared
with a null model that shuffles the same types over the same topology.
"""

import numpy as np

from hetgraphlets import HeteroGraph, count_all, global_counts
from hetgraphlets.generators import gen_small_world, permute_types

n, L = 3000, 3
edges = gen_small_world(n, 8, 0.1, seed=5)
types = np.arange(n) * L // n + 1          # contiguous blocks along the ring
g = HeteroGraph.from_edges(edges, types, L)


def triangle_shares(graph):
    tri = global_counts(count_all(graph)).by_shape(2)
    total = sum(tri.values())
    return {k.types: c / total for k, c in tri.items()}, total


observed, total = triangle_shares(g)
print(f"{total} triangles; {len(observed)} of 10 possible typed triangles occur")

null = [triangle_shares(g.with_types(permute_types(types, s), L))[0] for s in range(20)]
print(f"{'types':<12}{'observed':>10}{'null mean':>12}{'null sd':>10}")
for t in sorted(set(observed) | {k for d in null for k in d}):
    xs = np.array([d.get(t, 0.0) for d in null])
    print(f"{str(t):<12}{observed.get(t, 0.0):>10.3f}{xs.mean():>12.3f}{xs.std():>10.3f}")
# Same-type triangles dominate the observed census and are rare under shuffling.
