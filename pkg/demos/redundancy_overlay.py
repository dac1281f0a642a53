"""
Vertex redundancy against the mean-field prediction
===================================================

Probes on an Erdős-Rényi graph, averaged over random deployments, compared
degree by degree with ``2 eps + rho_S rho_T b(k)``.
"""

import numpy as np

from tracemap import (
    ProbeBudget,
    brandes_betweenness,
    generate_er,
    largest_connected_component,
    metrics,
    monte_carlo_exploration,
)

# a connected ER graph with mean degree 20
g, _ = largest_connected_component(generate_er(1000, 20, seed=7))
t = brandes_betweenness(g)
bbar = metrics.spectrum(g.degrees, t.vertex)

# two sources, ten percent of the vertices as targets
budget = ProbeBudget.from_density(g.n, 2, 0.1)
mc = monte_carlo_exploration(g, budget, "USP", realizations=2000, master_seed=7)
observed = metrics.spectrum(g.degrees, mc.r_n)
predicted = 2 * budget.epsilon + budget.rho_s * budget.rho_t * bbar.values

print(f"n={g.n} m={g.m} eps={budget.epsilon:.3f}")
print(f"{'k':>4} {'N_k':>5} {'<r_n> sim':>10} {'theory':>8}")
for k, pop, o, p in zip(observed.degrees, observed.populations, observed.values, predicted):
    if pop >= 20:
        print(f"{k:4d} {pop:5d} {o:10.3f} {p:8.3f}")

# the totals agree exactly in expectation
print("sum over vertices:", round(mc.r_n.sum(), 1), "vs",
      round(float((2 * budget.epsilon + budget.rho_s * budget.rho_t * t.vertex).sum()), 1))
