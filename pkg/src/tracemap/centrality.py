"""Vertex and edge betweenness over ordered vertex pairs.

Conventions: a vertex's betweenness sums ``x_i / sigma`` over ordered pairs
``(l, m)`` with ``l != m != i`` (endpoints excluded, so leaves score 0); an
edge's betweenness sums ``x_ij / sigma`` over all ordered pairs, so every
edge of a connected graph scores at least 2. Rescaled values divide by N.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, is_connected


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BetweennessTable:
    graph: Graph
    vertex: np.ndarray
    edge: np.ndarray

    @property
    def vertex_rescaled(self) -> np.ndarray:
        return self.vertex / self.graph.n

    @property
    def edge_rescaled(self) -> np.ndarray:
        return self.edge / self.graph.n


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError(
            "betweenness requires a connected graph; use largest_connected_component"
        )


def brandes_betweenness(g: Graph) -> BetweennessTable:
    """Exact betweenness by Brandes dependency accumulation from every source."""
    _require_connected(g)
    vb, eb = _kernels.brandes(g.indptr, g.indices, g.slot_edge, g.m)
    return BetweennessTable(g, vb, eb)


def brute_force_betweenness(g: Graph, max_n: int = 200) -> BetweennessTable:
    """Betweenness by explicitly listing every shortest path of every pair.

    Test oracle; exponential in the worst case, guarded by ``max_n``.
    """
    if g.n > max_n:
        raise ValueError(f"brute force limited to n <= {max_n}, got {g.n}")
    _require_connected(g)
    adj = [list(map(int, g.neighbors(i))) for i in range(g.n)]
    dist = []
    for s in range(g.n):
        d = [-1] * g.n
        d[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if d[w] < 0:
                    d[w] = d[v] + 1
                    q.append(w)
        dist.append(d)

    edge_index = {(int(a), int(b)): e for e, (a, b) in enumerate(g.edges)}
    vb = np.zeros(g.n)
    eb = np.zeros(g.m)
    for l in range(g.n):
        for m in range(g.n):
            if l == m:
                continue
            paths: list[list[int]] = []
            stack = [[l]]
            while stack:
                p = stack.pop()
                v = p[-1]
                if v == m:
                    paths.append(p)
                    continue
                for w in adj[v]:
                    if dist[l][w] == dist[l][v] + 1 and dist[w][m] == dist[v][m] - 1:
                        stack.append(p + [w])
            share = 1.0 / len(paths)
            for p in paths:
                for v in p[1:-1]:
                    vb[v] += share
                for a, b in zip(p, p[1:]):
                    eb[edge_index[(min(a, b), max(a, b))]] += share
    return BetweennessTable(g, vb, eb)


def incident_edge_sums(t: BetweennessTable) -> np.ndarray:
    """Sum of edge betweenness over the edges incident to each vertex."""
    g = t.graph
    out = np.zeros(g.n)
    np.add.at(out, g.edges[:, 0], t.edge)
    np.add.at(out, g.edges[:, 1], t.edge)
    return out


def sum_rule_residual(t: BetweennessTable) -> np.ndarray:
    """Relative violation of ``sum_j b_ij = 2 (b_i + N - 1)`` per vertex."""
    expected = 2.0 * (t.vertex + t.graph.n - 1)
    return np.abs(incident_edge_sums(t) - expected) / expected


def betweenness_by_degree(g: Graph, t: BetweennessTable) -> dict[int, float]:
    """Mean rescaled vertex betweenness over vertices of each occurring degree."""
    deg = g.degrees
    counts = np.bincount(deg)
    sums = np.bincount(deg, weights=t.vertex_rescaled, minlength=counts.size)
    return {int(k): float(sums[k] / counts[k]) for k in np.flatnonzero(counts)}


def power_law_exponent(by_degree: dict[int, float], k_min: int = 1) -> float:
    """Least-squares slope of ``log b(k)`` against ``log k`` over positive entries."""
    ks = np.array([k for k, b in by_degree.items() if k >= k_min and b > 0], dtype=float)
    bs = np.array([by_degree[int(k)] for k in ks])
    if ks.size < 2:
        raise ValueError("need at least two positive degree classes")
    return float(np.polyfit(np.log(ks), np.log(bs), 1)[0])
