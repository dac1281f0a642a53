"""
Fixed probing budget, moving split
==================================

At fixed ``eps = N_S N_T / N`` the map depends on how the budget is split
between sources and targets. Exchanging the two roles gives the same map
with ASP, so the curves are symmetric around ``rho_T = sqrt(eps / N)``.
The second half compares random deployment with deployment on the least
central vertices.
"""

import tempfile

import numpy as np

from tracemap import io
from tracemap.experiments import ExperimentConfig, compare_deployment, symmetry_sweep

with tempfile.TemporaryDirectory() as out:
    base = dict(graph="rsf:n=3000,gamma=2.3", seed=3, epsilon=2.0,
                rho_t_grid=tuple(np.geomspace(1e-3, 0.5, 9)), realizations=10, out=out)

    rep = symmetry_sweep(ExperimentConfig(psc="RSP", **base))
    ext = rep["extremum"]["edge_fraction"]
    print(f"symmetry point sqrt(eps/N) = {rep['symmetry_point']:.4f}")
    if ext["kind"] is not None:
        print(f"E*/E extremum: {ext['kind']} near rho_T = {ext['rho_t']:.4f}")
    header, rows = io.read_csv(f"{out}/sweep.csv")
    col = {name: i for i, name in enumerate(header)}
    print(f"{'rho_T':>8} {'N_S':>5} {'N*/N':>6} {'E*/E':>6}")
    for r in rows:
        print(f"{float(r[col['rho_t']]):8.4f} {r[col['n_s']]:>5} "
              f"{float(r[col['vertex_fraction']]):6.3f} {float(r[col['edge_fraction']]):6.3f}")

    rep = compare_deployment(ExperimentConfig(**base))
    print("low-betweenness better everywhere:", rep["low_betweenness_wins"])
    header, rows = io.read_csv(f"{out}/compare.csv")
    col = {name: i for i, name in enumerate(header)}
    print(f"{'rho_T':>8} {'N*/N rand':>10} {'N*/N low':>9} {'E*/E rand':>10} {'E*/E low':>9}")
    for r in rows:
        vals = [float(r[col[c]]) for c in ("rho_t", "random_vertex_fraction", "low_vertex_fraction",
                                           "random_edge_fraction", "low_edge_fraction")]
        print(f"{vals[0]:8.4f} {vals[1]:10.3f} {vals[2]:9.3f} {vals[3]:10.3f} {vals[4]:9.3f}")
