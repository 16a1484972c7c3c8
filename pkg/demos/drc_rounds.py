"""Dependent random choice on a few graph families.

Every non-Fail outcome carries a witness that is re-checked against the
graph. The constants an asymptotic argument would use are printed for
comparison with the desk values.
"""

from collections import Counter
from fractions import Fraction

from rtworkbench.cli import asymptotic_drc_constants
from rtworkbench.construct import BEParams, build_be_graph
from rtworkbench.drc import DRCParams, drc_round, find_half_density_pair
from rtworkbench.graph import VertexSet, complete_bipartite, complete_graph, turan_graph

n = 1000
half = (VertexSet.of(n, range(n // 2)), VertexSet.of(n, range(n // 2, n)))
tur = turan_graph(n, 3)
pair = find_half_density_pair(tur, Fraction(1, 10**6))
be = build_be_graph(BEParams(n, 16, 0.3, seed=2))
cases = {
    "K_{n/2,n/2}": (complete_bipartite(n // 2, n // 2), *half),
    "K_n": (complete_graph(n), *half),
    "T(n,3)": (tur, pair.A, pair.B),
    "sphere graph": (be.graph, be.X, be.Y),
}
for name, (g, A, B) in cases.items():
    kinds = Counter()
    sizes = []
    for seed in range(30):
        out = drc_round(g, A, B, DRCParams(20, 0.05, 0.01, seed=seed))
        assert out.validate(g)
        kinds[out.kind] += 1
        if out.kind == "IndependentSet":
            sizes.append(len(out.witness))
    extra = f", independent sets of size {min(sizes)}..{max(sizes)}" if sizes else ""
    print(f"{name:13s} {dict(kinds)}{extra}")
print("asymptotic constants at this n:", asymptotic_drc_constants(n))
