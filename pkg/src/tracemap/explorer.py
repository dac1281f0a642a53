"""Source/target deployment and simulated traceroute probing.

A probe from source ``s`` to target ``t`` adds the selected path(s) to the
sampled graph and increments redundancy counters:

* ``r_n[v]`` once per probe visiting ``v``, endpoints included;
* ``r_e[e]`` once per probe traversing edge ``e``;
* a transit weight for each interior vertex ``i`` reached as ``k -> i -> j``.

Under ASP a probe reveals the union of all shortest paths of the pair; each
vertex and edge of that union is counted once per pair and an interior
vertex spreads one unit of transit weight over its edge pairs in proportion
to the number of shortest paths through each.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .centrality import BetweennessTable
from .graph import Graph
from .paths import Psc
from .seeding import derive_rng, derive_seed


class PlacementError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeBudget:
    """Numbers of sources and targets on an ``n``-vertex graph."""

    n: int
    n_s: int
    n_t: int

    def __post_init__(self) -> None:
        if self.n_s < 0 or self.n_t < 0:
            raise ValueError("source and target counts must be non-negative")

    @classmethod
    def from_density(cls, n: int, n_s: int, rho_t: float) -> "ProbeBudget":
        if not 0 <= rho_t <= 1:
            raise ValueError(f"rho_t must lie in [0, 1], got {rho_t}")
        return cls(n, int(n_s), int(round(rho_t * n)))

    @property
    def rho_t(self) -> float:
        return self.n_t / self.n

    @property
    def rho_s(self) -> float:
        return self.n_s / self.n

    @property
    def epsilon(self) -> float:
        return self.n_s * self.n_t / self.n

    def as_dict(self) -> dict:
        return {"n": self.n, "n_s": self.n_s, "n_t": self.n_t, "rho_s": self.rho_s,
                "rho_t": self.rho_t, "epsilon": self.epsilon}


@dataclass(frozen=True, eq=False)
class Placement:
    sources: np.ndarray
    targets: np.ndarray
    strategy: str = "random"

    @property
    def n_s(self) -> int:
        return int(self.sources.size)

    @property
    def n_t(self) -> int:
        return int(self.targets.size)

    def swapped(self) -> "Placement":
        return Placement(self.targets, self.sources, self.strategy)

    def validate(self, g: Graph, allow_overlap: bool = False) -> None:
        for name, vs in (("sources", self.sources), ("targets", self.targets)):
            if vs.size and (vs.min() < 0 or vs.max() >= g.n):
                raise PlacementError(f"{name} contain vertices outside the graph")
            if np.unique(vs).size != vs.size:
                raise PlacementError(f"duplicate {name}")
        if not allow_overlap and np.intersect1d(self.sources, self.targets).size:
            raise PlacementError("sources and targets overlap")


def _check_budget(g: Graph, n_s: int, n_t: int) -> None:
    if n_s < 0 or n_t < 0:
        raise PlacementError("source and target counts must be non-negative")
    if n_s + n_t > g.n:
        raise PlacementError(f"n_s + n_t = {n_s + n_t} exceeds n = {g.n}")


def place_random(g: Graph, n_s: int, n_t: int, seed: int | np.random.Generator,
                 allow_overlap: bool = False) -> Placement:
    """Uniform deployment: sources, then targets, drawn without replacement.

    With ``allow_overlap`` the two sets are drawn independently and may share
    vertices.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if allow_overlap:
        if max(n_s, n_t) > g.n:
            raise PlacementError(f"cannot draw {max(n_s, n_t)} distinct vertices from {g.n}")
        s = rng.choice(g.n, size=n_s, replace=False)
        t = rng.choice(g.n, size=n_t, replace=False)
        return Placement(np.sort(s), np.sort(t), "random-overlap")
    _check_budget(g, n_s, n_t)
    pick = rng.permutation(g.n)[: n_s + n_t]
    return Placement(np.sort(pick[:n_s]), np.sort(pick[n_s:]), "random")


def place_low_betweenness(g: Graph, t: BetweennessTable, n_s: int, n_t: int) -> Placement:
    """Deploy on the ``n_s + n_t`` least central vertices (ties by label).

    Sources take the ``n_s`` smallest betweenness values, targets the rest.
    """
    if n_s < 1:
        raise PlacementError("at least one source is required")
    _check_budget(g, n_s, n_t)
    order = np.lexsort((np.arange(g.n), t.vertex))
    return Placement(np.sort(order[:n_s]), np.sort(order[n_s : n_s + n_t]), "low-betweenness")


@dataclass(eq=False)
class SampledGraph:
    """Discovered subgraph plus redundancy and transit counters.

    ``transit_keys`` encode ``k -> i -> j`` as ``(i * n + k) * n + j`` and are
    sorted, so the transits of vertex ``i`` are one contiguous block.
    """

    graph: Graph
    psc: Psc
    placement: Placement
    r_n: np.ndarray
    r_e: np.ndarray
    transit_keys: np.ndarray
    transit_weights: np.ndarray
    steps: int
    probes: int
    terminal: np.ndarray
    skipped_pairs: int = 0

    @property
    def vertex_mask(self) -> np.ndarray:
        mask = self.r_n > 0
        mask[self.placement.sources] = True
        mask[self.placement.targets] = True
        return mask

    @property
    def edge_mask(self) -> np.ndarray:
        return self.r_e > 0

    @property
    def discovered_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.vertex_mask)

    @property
    def discovered_edges(self) -> np.ndarray:
        return self.graph.edges[self.edge_mask]

    @property
    def n_vertices(self) -> int:
        return int(self.vertex_mask.sum())

    @property
    def n_edges(self) -> int:
        return int(self.edge_mask.sum())

    @property
    def discovered_degree(self) -> np.ndarray:
        """``k*_i``: discovered edges incident to each vertex."""
        e = self.graph.edges[self.edge_mask]
        return (np.bincount(e[:, 0], minlength=self.graph.n)
                + np.bincount(e[:, 1], minlength=self.graph.n))

    def transit_vertex(self) -> np.ndarray:
        n = self.graph.n
        return self.transit_keys // (n * n)

    def transits(self, i: int) -> dict[tuple[int, int], float]:
        """Transit weights ``{(k, j): c_i(k, j)}`` recorded at vertex ``i``."""
        n = self.graph.n
        lo = np.searchsorted(self.transit_keys, i * n * n)
        hi = np.searchsorted(self.transit_keys, (i + 1) * n * n)
        rest = self.transit_keys[lo:hi] - i * n * n
        return {(int(r // n), int(r % n)): float(w)
                for r, w in zip(rest, self.transit_weights[lo:hi])}

    def edge_redundancy(self) -> dict[tuple[int, int], int]:
        idx = np.flatnonzero(self.r_e)
        return {(int(a), int(b)): int(self.r_e[e]) for e, (a, b) in zip(idx, self.graph.edges[idx])}


# (i*n + k)*n + j must fit in int64
_MAX_TRANSIT_N = int(np.iinfo(np.int64).max ** (1 / 3))


def run_exploration(
    g: Graph,
    placement: Placement,
    psc: Psc | str,
    seed: int | np.random.Generator,
    tie_seed: int | None = None,
    allow_overlap: bool = False,
    check: bool = True,
    transits: bool = True,
    usp_cache: dict[int, tuple[np.ndarray, np.ndarray]] | None = None,
) -> SampledGraph:
    """Probe every source-target pair of ``placement`` and collect the map.

    Args:
        g: Underlying graph.
        placement: Sources and targets.
        psc: Path selection criterion (``"USP"``, ``"RSP"`` or ``"ASP"``).
        seed: Seed or generator for RSP path draws.
        tie_seed: Seed for USP routing-tree tie breaking; USP trees depend
            only on ``(tie_seed, target)``. Required when ``seed`` is a
            generator, otherwise derived from ``seed``.
        allow_overlap: Accept placements whose sources and targets overlap;
            pairs with ``s == t`` are skipped.
        check: Validate the placement against the graph.
        transits: Collect transit counters; without them ``transit_keys``
            is left empty.
        usp_cache: Routing-tree distances and parents keyed by target, filled on demand;
            only valid for one ``(graph, tie_seed)``.

    Pairs in different components are skipped and counted.
    """
    psc = Psc.parse(psc)
    if check:
        placement.validate(g, allow_overlap)
    if g.n > _MAX_TRANSIT_N:
        raise ValueError(f"graph too large for transit encoding (n={g.n})")
    if isinstance(seed, np.random.Generator):
        rng = seed
        if tie_seed is None and psc is Psc.USP:
            raise ValueError("USP with a generator seed needs an explicit tie_seed")
    else:
        rng = derive_rng(seed, "rsp")
        if tie_seed is None:
            tie_seed = derive_seed(seed, "usp")
    n = g.n
    r_n = np.zeros(n, dtype=np.int64)
    r_e = np.zeros(g.m, dtype=np.int64)
    terminal = np.zeros(n, dtype=np.int64)
    key_chunks: list[np.ndarray] = []
    weight_chunks: list[np.ndarray] = []
    steps = 0
    probes = 0
    skipped = 0
    S = np.asarray(placement.sources, dtype=np.int64)
    T = np.asarray(placement.targets, dtype=np.int64)

    def usable(dist: np.ndarray, ends: np.ndarray) -> tuple[np.ndarray, int]:
        # drops the root itself and unreachable ends
        nonlocal skipped
        d = dist[ends]
        ok = d > 0
        kept = ends[ok]
        skipped += ends.size - kept.size
        return kept, int(d[ok].sum())

    if psc is Psc.USP:
        for t in T:
            t = int(t)
            tree = None if usp_cache is None else usp_cache.get(t)
            if tree is None:
                dist = _kernels.bfs(g.indptr, g.indices, t)[0]
                parent = _kernels.random_parents(
                    g.indptr, g.indices, dist, derive_rng(tie_seed, "usp-tree", t).random(n)
                )
                tree = (dist, parent)
                if usp_cache is not None:
                    # int32 halves the cache on large sweeps
                    usp_cache[t] = (dist.astype(np.int32), parent.astype(np.int32))
            dist, parent = tree
            src, hops = usable(dist, S)
            flat, offsets = _kernels.follow_parents(parent, dist, src)
            key_chunks.append(
                _kernels.accumulate_paths(g.indptr, g.indices, g.slot_edge, flat, offsets, r_n, r_e)
            )
            steps += hops
            probes += src.size
            terminal[src] += 1
            terminal[t] += src.size
    elif psc is Psc.RSP:
        from_sources = S.size <= T.size
        roots, ends = (S, T) if from_sources else (T, S)
        for root in roots:
            root = int(root)
            dist, sigma, _ = _kernels.bfs(g.indptr, g.indices, root)
            others, hops = usable(dist, ends)
            draws = rng.random(hops)
            # walks run end -> root; store them source first
            flat, offsets = _kernels.sigma_walks(
                g.indptr, g.indices, dist, sigma, others, draws, from_sources
            )
            key_chunks.append(
                _kernels.accumulate_paths(g.indptr, g.indices, g.slot_edge, flat, offsets, r_n, r_e)
            )
            steps += hops
            probes += others.size
            terminal[others] += 1
            terminal[root] += others.size
    else:
        cache_sources = S.size <= T.size
        small, large = (S, T) if cache_sources else (T, S)
        cached = {int(v): _kernels.bfs(g.indptr, g.indices, int(v))[:2] for v in small}
        mark = np.zeros(n, dtype=np.int64)
        level = np.empty(n, dtype=np.int64)
        nxt = np.empty(n, dtype=np.int64)
        keys = np.empty(1024, dtype=np.int64)
        weights = np.empty(1024, dtype=np.float64)
        nkeys = 0
        stamp = 0
        for v in large:
            v = int(v)
            dist_v, sigma_v = _kernels.bfs(g.indptr, g.indices, v)[:2]
            for u, (dist_u, sigma_u) in cached.items():
                s, t = (u, v) if cache_sources else (v, u)
                ds, ss, dt, st = ((dist_u, sigma_u, dist_v, sigma_v) if cache_sources
                                  else (dist_v, sigma_v, dist_u, sigma_u))
                if s == t or ds[t] < 0:
                    skipped += 1
                    continue
                stamp += 1
                keys, weights, nkeys, nedges = _kernels.dag_union(
                    g.indptr, g.indices, g.slot_edge, ds, ss, dt, st, t,
                    stamp, mark, level, nxt, r_n, r_e, keys, weights, nkeys,
                )
                steps += int(nedges)
                probes += 1
                terminal[s] += 1
                terminal[t] += 1
        key_chunks.append(keys[:nkeys])
        weight_chunks.append(weights[:nkeys])

    if int(r_e.sum()) != steps:
        raise RuntimeError(f"edge-count conservation violated: {int(r_e.sum())} != {steps}")
    all_keys = np.concatenate(key_chunks) if key_chunks else np.zeros(0, dtype=np.int64)
    if not transits:
        uniq, tw = np.zeros(0, dtype=np.int64), np.zeros(0)
    elif psc is Psc.ASP:
        all_w = np.concatenate(weight_chunks) if weight_chunks else np.zeros(0)
        uniq, inv = np.unique(all_keys, return_inverse=True)
        tw = np.bincount(inv, weights=all_w, minlength=uniq.size)
    else:
        uniq, counts = np.unique(all_keys, return_counts=True)
        tw = counts.astype(np.float64)
    return SampledGraph(
        graph=g, psc=psc, placement=placement, r_n=r_n, r_e=r_e,
        transit_keys=uniq, transit_weights=tw, steps=steps, probes=probes,
        terminal=terminal, skipped_pairs=skipped,
    )


REALIZATION_BLOCK = 256


@dataclass(eq=False)
class MonteCarloResult:
    """Per-vertex and per-edge means over independent deployments."""

    graph: Graph
    budget: ProbeBudget
    psc: Psc
    strategy: str
    realizations: int
    pi_vertex: np.ndarray
    pi_edge: np.ndarray
    r_n: np.ndarray
    r_e: np.ndarray
    k_star: np.ndarray
    summaries: list[dict] = field(default_factory=list)


def monte_carlo_exploration(
    g: Graph,
    budget: ProbeBudget,
    psc: Psc | str,
    strategy: str = "random",
    realizations: int = 10,
    master_seed: int = 0,
    betweenness: BetweennessTable | None = None,
    on_realization: Callable[[int, SampledGraph], None] | None = None,
) -> MonteCarloResult:
    """Average discovery indicators and counters over deployments.

    Realizations are grouped in blocks of ``REALIZATION_BLOCK``; block ``b``
    owns a stream derived from ``(master_seed, b)`` consumed in order by its
    realizations, so blocks can run in any order or in parallel without
    changing results. USP routing trees are shared by all realizations.
    Transit counters are not collected.
    ``strategy="low-betweenness"`` needs ``betweenness`` and gives the same
    deployment in every realization.
    """
    if realizations < 1:
        raise ValueError("realizations must be >= 1")
    if budget.n != g.n:
        raise ValueError(f"budget is for n={budget.n}, graph has n={g.n}")
    psc = Psc.parse(psc)
    if strategy == "low-betweenness":
        if betweenness is None:
            raise ValueError("low-betweenness deployment needs a BetweennessTable")
        fixed = place_low_betweenness(g, betweenness, budget.n_s, budget.n_t)
    elif strategy == "random":
        fixed = None
    else:
        raise ValueError(f"unknown deployment strategy {strategy!r}")
    tie_seed = derive_seed(master_seed, "usp")
    sums = {
        "pi_vertex": np.zeros(g.n), "pi_edge": np.zeros(g.m),
        "r_n": np.zeros(g.n), "r_e": np.zeros(g.m), "k_star": np.zeros(g.n),
    }
    summaries = []
    usp_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    a, b = g.edges[:, 0], g.edges[:, 1]
    for r in range(realizations):
        if r % REALIZATION_BLOCK == 0:
            rng = derive_rng(master_seed, "realization-block", r // REALIZATION_BLOCK)
        placement = fixed if fixed is not None else place_random(
            g, budget.n_s, budget.n_t, rng
        )
        sg = run_exploration(g, placement, psc, rng, tie_seed=tie_seed, check=False,
                             transits=False, usp_cache=usp_cache)
        found = sg.vertex_mask
        used = sg.r_e > 0
        k_star = np.bincount(a[used], minlength=g.n) + np.bincount(b[used], minlength=g.n)
        sums["pi_vertex"] += found
        sums["pi_edge"] += used
        sums["r_n"] += sg.r_n
        sums["r_e"] += sg.r_e
        sums["k_star"] += k_star
        n_found = int(found.sum())
        summaries.append({
            "vertex_fraction": n_found / g.n,
            "edge_fraction": int(used.sum()) / g.m,
            "degree_ratio": (k_star.sum() / max(n_found, 1)) / (2 * g.m / g.n),
        })
        if on_realization is not None:
            on_realization(r, sg)
    means = {k: v / realizations for k, v in sums.items()}
    return MonteCarloResult(g, budget, psc, strategy, realizations, summaries=summaries, **means)
