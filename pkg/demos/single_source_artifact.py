"""
The single-source power law
===========================

With one source and almost every vertex a target, the union of paths is a
spanning tree of the source, and its degree distribution decays like
``k^-1`` although the graph is Poisson. A handful of sources removes the
artifact: the sampled degrees are cut off near the true mean degree.
"""

import numpy as np

from tracemap import (
    ProbeBudget,
    generate_er,
    largest_connected_component,
    metrics,
    place_random,
    run_exploration,
)

g, _ = largest_connected_component(generate_er(3000, 20, seed=1))
rng = np.random.default_rng(1)

for n_s in (1, 5):
    budget = ProbeBudget.from_density(g.n, n_s, 0.9)
    pooled = []
    for r in range(10):
        p = place_random(g, budget.n_s, budget.n_t, rng)
        sg = run_exploration(g, p, "USP", int(rng.integers(2**31)))
        pooled.append(sg.discovered_degree[sg.vertex_mask])
    dist = metrics.degree_distribution(np.concatenate(pooled))
    line = f"N_S={n_s}: max k* = {dist.k.max():3d}"
    try:
        line += f", log-log slope on [2, 10] = {metrics.loglog_slope(dist, 2, 10):+.2f}"
    except ValueError:
        pass
    print(line)
