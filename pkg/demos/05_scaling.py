"""Wall time on Erdos-Renyi graphs of mean degree 10 as the node count grows.

Per-edge work depends on local degrees only, so time should grow roughly with
the edge count.
"""

import os
import time

from hetgraphlets import count_all
from hetgraphlets.generators import gen_er, typed_graph

count_all(typed_graph(gen_er(200, 0.05, 0), 200, 5, 0))   # JIT warm-up

prev = None
for n in (10_000, 30_000, 100_000):
    g = typed_graph(gen_er(n, 10.0 / (n - 1), seed=n), n, L=5, seed=n)
    t0 = time.perf_counter()
    t = count_all(g, workers=os.cpu_count() or 1)
    dt = time.perf_counter() - t0
    growth = f"  x{dt / prev:.1f}" if prev else ""
    print(f"n={n:>7}  M={g.num_edges:>7}  {dt:6.2f}s  {t.mean_nonzeros():.1f} keys/edge{growth}")
    prev = dt
