"""Splice complete bipartite layers of growing size into a small nice graph.

Edges climb past n^2/8 while the exact independence number grows by at
most the layer size.
"""

from rtworkbench.certify import exact_mis
from rtworkbench.construct import BEParams, build_be_graph
from rtworkbench.densify import DensifyParams, densify

n = 40
nice = build_be_graph(BEParams(n, 8, 0.4, seed=3))
alpha0 = exact_mis(nice.graph).alpha
print(f"start: e={nice.graph.num_edges} (n^2/8 = {n * n // 8}), alpha={alpha0}")
for d in range(1, 9):
    out, rec = densify(nice, DensifyParams(d, seed=3))
    alpha = exact_mis(out.graph).alpha
    print(f"d={d}: e={rec.e_after:4d}  kept {rec.e_G0:3d} (floor {float(rec.averaging_floor):6.1f})  "
          f"alpha={alpha} <= {alpha0 + d}  hybrid bound {float(rec.lemma_rhs):7.1f}")
