"""Build sphere-point graphs, confirm they are nice, and put the measured
statistics next to the cap-measure prediction and the large-n promises."""

from rtworkbench.certify import mis_bounds
from rtworkbench.construct import (
    BEParams,
    be_theoretical_bounds,
    build_be_graph,
    expected_cross_density,
    verify_nice,
)

for h, eps in [(4, 0.1), (16, 0.3), (64, 0.5)]:
    params = BEParams(n=2000, h=h, epsilon=eps, seed=1)
    nice = build_be_graph(params)
    s = nice.summary()
    cert = verify_nice(nice)
    lower, upper = mis_bounds(nice.graph)
    promised = be_theoretical_bounds(params.n, h, eps)
    print(f"h={h:3d} eps={eps}: e={s['e']}, min degree {s['min_degree']}, "
          f"nice: {'yes' if not cert.found else cert.kind.value}")
    print(f"    cross density {s['cross_density']:.4f}, cap prediction {expected_cross_density(h, eps):.4f}")
    print(f"    independence number in [{len(lower)}, {upper}], "
          f"large-n promise {promised['independence_bound']:.0f} (regime: {promised.flags['large_n_regime']})")
