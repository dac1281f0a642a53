import itertools

import numpy as np
import pytest

from tracemap.centrality import brandes_betweenness
from tracemap.explorer import (
    Placement,
    PlacementError,
    ProbeBudget,
    monte_carlo_exploration,
    place_low_betweenness,
    place_random,
    run_exploration,
)
from tracemap.generators import generate_er
from tracemap.graph import build_graph, largest_connected_component

PATH3 = build_graph(3, [(0, 1), (1, 2)])
CYCLE4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
STAR4 = build_graph(4, [(0, 1), (0, 2), (0, 3)])
TREE7 = build_graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])


def placement(s, t):
    return Placement(np.array(s, dtype=np.int64), np.array(t, dtype=np.int64))


def er(n=300, k=6, seed=1):
    return largest_connected_component(generate_er(n, k, seed))[0]


def test_budget_from_density():
    b = ProbeBudget.from_density(1000, 5, 0.1)
    assert (b.n_s, b.n_t) == (5, 100)
    assert np.isclose(b.epsilon, 0.5)
    assert np.isclose(b.rho_s, 0.005)
    with pytest.raises(ValueError):
        ProbeBudget.from_density(10, 1, 1.5)


def test_place_random_disjoint_and_deterministic():
    g = er(10, 4)
    p = place_random(g, 2, 3, 7)
    assert np.unique(np.concatenate([p.sources, p.targets])).size == 5
    q = place_random(g, 2, 3, 7)
    assert np.array_equal(p.sources, q.sources) and np.array_equal(p.targets, q.targets)


def test_place_random_partition():
    p = place_random(STAR4, 1, 3, 0)
    assert sorted(np.concatenate([p.sources, p.targets]).tolist()) == [0, 1, 2, 3]
    with pytest.raises(PlacementError):
        place_random(STAR4, 2, 3, 0)


def test_place_low_betweenness():
    p = place_low_betweenness(STAR4, brandes_betweenness(STAR4), 1, 2)
    assert p.sources.tolist() == [1] and p.targets.tolist() == [2, 3]
    p = place_low_betweenness(TREE7, brandes_betweenness(TREE7), 2, 2)
    assert set(p.sources.tolist() + p.targets.tolist()) == {3, 4, 5, 6}
    with pytest.raises(PlacementError):
        place_low_betweenness(STAR4, brandes_betweenness(STAR4), 0, 2)


@pytest.mark.parametrize("p, msg", [
    (placement([1], [1]), "overlap"),
    (placement([1, 1], [2]), "duplicate"),
    (placement([9], [2]), "outside"),
])
def test_invalid_placements(p, msg):
    with pytest.raises(PlacementError, match=msg):
        run_exploration(STAR4, p, "USP", 0)


@pytest.mark.parametrize("psc", ["USP", "RSP", "ASP"])
def test_star_forced_paths(psc):
    sg = run_exploration(STAR4, placement([1], [2, 3]), psc, 0)
    assert sg.discovered_vertices.tolist() == [0, 1, 2, 3]
    assert sg.n_edges == 3
    assert sg.r_n[0] == 2


@pytest.mark.parametrize("psc", ["USP", "RSP", "ASP"])
def test_path_counters(psc):
    sg = run_exploration(PATH3, placement([0], [2]), psc, 0)
    assert sg.r_e.tolist() == [1, 1]
    assert sg.r_n[1] == 1
    assert sg.transits(1) == {(0, 2): 1.0}
    assert sg.edge_redundancy() == {(0, 1): 1, (1, 2): 1}


def test_cycle_degeneracy_contrast():
    asp = run_exploration(CYCLE4, placement([0], [2]), "ASP", 0)
    assert asp.n_edges == 4
    for s in range(10):
        usp = run_exploration(CYCLE4, placement([0], [2]), "USP", s)
        used = {tuple(e) for e in usp.discovered_edges.tolist()}
        assert used in ({(0, 1), (1, 2)}, {(0, 3), (2, 3)})


def test_endpoints_always_discovered():
    g = er()
    p = place_random(g, 3, 20, 2)
    sg = run_exploration(g, p, "RSP", 2)
    assert sg.vertex_mask[p.sources].all() and sg.vertex_mask[p.targets].all()


def test_usp_subset_of_asp():
    g = er()
    for s in range(5):
        p = place_random(g, 2, 15, s)
        usp = run_exploration(g, p, "USP", s)
        rsp = run_exploration(g, p, "RSP", s)
        asp = run_exploration(g, p, "ASP", s)
        assert np.all(asp.edge_mask[usp.edge_mask])
        assert np.all(asp.edge_mask[rsp.edge_mask])


def test_more_targets_discover_more():
    g = er()
    p = place_random(g, 2, 30, 4)
    small = Placement(p.sources, p.targets[:10])
    a = run_exploration(g, small, "ASP", 0)
    b = run_exploration(g, p, "ASP", 0)
    assert np.all(b.edge_mask[a.edge_mask])


def test_run_is_deterministic():
    g = er()
    p = place_random(g, 3, 20, 1)
    for psc in ("USP", "RSP", "ASP"):
        a = run_exploration(g, p, psc, 5)
        b = run_exploration(g, p, psc, 5)
        assert np.array_equal(a.r_e, b.r_e) and np.array_equal(a.transit_keys, b.transit_keys)


def test_conservation_and_probe_count():
    g = er()
    p = place_random(g, 3, 20, 1)
    for psc in ("USP", "RSP", "ASP"):
        sg = run_exploration(g, p, psc, 3)
        assert sg.r_e.sum() == sg.steps
        assert sg.probes == 60


def test_asp_swap_symmetry():
    g = er()
    p = place_random(g, 4, 12, 9)
    a = run_exploration(g, p, "ASP", 0)
    b = run_exploration(g, p.swapped(), "ASP", 0)
    assert np.array_equal(a.vertex_mask, b.vertex_mask)
    assert np.array_equal(a.edge_mask, b.edge_mask)


def test_overlap_skips_self_pairs():
    sg = run_exploration(STAR4, placement([1, 2], [2, 3]), "USP", 0, allow_overlap=True)
    assert sg.probes == 3 and sg.skipped_pairs == 1


def test_monte_carlo_single_realization_integral():
    g = er()
    mc = monte_carlo_exploration(g, ProbeBudget.from_density(g.n, 2, 0.05), "USP",
                                 realizations=1, master_seed=0)
    assert set(np.unique(mc.pi_vertex)) <= {0.0, 1.0}
    assert np.all(mc.r_e == np.round(mc.r_e))


def test_monte_carlo_star_exact():
    # exhaustive over the 12 ordered disjoint (s, t) placements; the center
    # lies on every leaf-leaf path, so it is always found
    exact = {0: 1.0}
    for leaf in (1, 2, 3):
        hits = sum(leaf in (s, t) for s, t in itertools.permutations(range(4), 2))
        exact[leaf] = hits / 12
    mc = monte_carlo_exploration(STAR4, ProbeBudget(4, 1, 1), "RSP", realizations=6000,
                                 master_seed=1)
    for v, p in exact.items():
        se = np.sqrt(p * (1 - p) / 6000)
        assert abs(mc.pi_vertex[v] - p) <= 4 * se + 1e-12


def test_monte_carlo_block_independence():
    g = er(80, 4)
    b = ProbeBudget.from_density(g.n, 2, 0.1)
    a = monte_carlo_exploration(g, b, "RSP", realizations=3, master_seed=4)
    c = monte_carlo_exploration(g, b, "RSP", realizations=3, master_seed=4)
    assert np.array_equal(a.pi_edge, c.pi_edge)
    assert a.summaries == c.summaries


def test_monte_carlo_low_betweenness_is_fixed():
    t = brandes_betweenness(TREE7)
    mc = monte_carlo_exploration(TREE7, ProbeBudget(7, 2, 2), "USP", "low-betweenness",
                                 realizations=5, betweenness=t)
    assert np.all(mc.pi_vertex[[3, 4, 5, 6]] == 1.0)
    with pytest.raises(ValueError):
        monte_carlo_exploration(TREE7, ProbeBudget(7, 2, 2), "USP", "low-betweenness")
    with pytest.raises(ValueError):
        monte_carlo_exploration(TREE7, ProbeBudget(7, 2, 2), "USP", realizations=0)
