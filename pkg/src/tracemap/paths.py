"""Shortest-path DAGs and the three path selection criteria.

* USP (unique shortest path): every target owns one routing tree, fixed for the
  whole experiment; each vertex forwards toward the target through a single
  next hop picked at random among its equivalent candidates.
* RSP (random shortest path): each probe draws a fresh path uniformly among
  all shortest paths of the pair.
* ASP (all shortest paths): a probe reveals every shortest path of the pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Graph
from .seeding import derive_rng


class Psc(str, enum.Enum):
    USP = "USP"
    RSP = "RSP"
    ASP = "ASP"

    @classmethod
    def parse(cls, value: "str | Psc") -> "Psc":
        try:
            return cls(str(value.value if isinstance(value, Psc) else value).upper())
        except ValueError:
            raise ValueError(f"unknown path selection criterion {value!r}") from None


class DisconnectedPairError(ValueError):
    """Source and target lie in different components."""


def _check_vertex(g: Graph, v: int, what: str = "vertex") -> int:
    v = int(v)
    if not 0 <= v < g.n:
        raise IndexError(f"{what} {v} out of range [0, {g.n})")
    return v


@dataclass(frozen=True, eq=False)
class ShortestPathDag:
    """BFS shortest-path DAG rooted at ``root``; ``dist == -1`` if unreachable."""

    graph: Graph
    root: int
    dist: np.ndarray
    sigma: np.ndarray
    order: np.ndarray

    def preds(self, v: int) -> np.ndarray:
        d = self.dist[v]
        if d <= 0:
            return np.zeros(0, dtype=np.int64)
        nb = self.graph.neighbors(v)
        return nb[self.dist[nb] == d - 1]

    @property
    def predecessors(self) -> list[np.ndarray]:
        return [self.preds(v) for v in range(self.graph.n)]

    def reachable(self, v: int) -> bool:
        return bool(self.dist[v] >= 0)


def bfs_dag(g: Graph, root: int) -> ShortestPathDag:
    root = _check_vertex(g, root, "root")
    dist, sigma, order = _kernels.bfs(g.indptr, g.indices, root)
    return ShortestPathDag(g, root, dist, sigma, order)


@dataclass(frozen=True, eq=False)
class UspTree:
    """Routing tree toward ``target``: ``next_hop[v]`` is v's unique next hop.

    ``next_hop`` is -1 for the target itself and for unreachable vertices.
    """

    target: int
    next_hop: np.ndarray
    dist: np.ndarray

    def route(self, source: int) -> np.ndarray:
        if self.dist[source] < 0:
            raise DisconnectedPairError(f"{source} cannot reach {self.target}")
        flat, _ = _kernels.follow_parents(
            self.next_hop, self.dist, np.array([source], dtype=np.int64)
        )
        return flat

    def routes(self, sources: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Concatenated routes for many sources, as ``(flat, offsets)``."""
        sources = np.asarray(sources, dtype=np.int64)
        if sources.size and (self.dist[sources] < 0).any():
            raise DisconnectedPairError(f"some sources cannot reach {self.target}")
        return _kernels.follow_parents(self.next_hop, self.dist, sources)


def build_usp_tree(g: Graph, target: int, tie_seed: int) -> UspTree:
    """Fixed routing tree toward ``target``.

    Ties among equivalent next hops are broken uniformly at random with a
    stream derived from ``(tie_seed, target)``, so the tree is reproducible
    and independent from the trees of other targets.
    """
    target = _check_vertex(g, target, "target")
    dist, _, _ = _kernels.bfs(g.indptr, g.indices, target)
    u = derive_rng(tie_seed, "usp-tree", target).random(g.n)
    return UspTree(target, _kernels.random_parents(g.indptr, g.indices, dist, u), dist)


@dataclass(frozen=True)
class ProbePath:
    vertices: tuple[int, ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[a], v[a + 1]) for a in range(len(v) - 1)]

    def __len__(self) -> int:
        return max(len(self.vertices) - 1, 0)


@dataclass
class PathState:
    """Per-experiment state for :func:`select_paths`.

    USP trees are built lazily and cached so that every source probing a
    target sees the same route; RSP draws come from one seeded stream.
    """

    graph: Graph
    seed: int
    usp_trees: dict[int, UspTree] = field(default_factory=dict)
    rng: np.random.Generator = field(init=False)

    def __post_init__(self) -> None:
        self.rng = derive_rng(self.seed, "rsp")

    def usp_tree(self, target: int) -> UspTree:
        tree = self.usp_trees.get(target)
        if tree is None:
            tree = build_usp_tree(self.graph, target, self.seed)
            self.usp_trees[target] = tree
        return tree


def sample_shortest_path(dag: ShortestPathDag, end: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random shortest path ``root -> end`` by a sigma-weighted
    backward walk from ``end``."""
    d = int(dag.dist[end])
    if d < 0:
        raise DisconnectedPairError(f"{end} unreachable from {dag.root}")
    g = dag.graph
    flat, _ = _kernels.sigma_walks(
        g.indptr, g.indices, dag.dist, dag.sigma, np.array([end], dtype=np.int64),
        rng.random(d), True,
    )
    return flat


def enumerate_shortest_paths(dag: ShortestPathDag, end: int, limit: int = 100_000) -> list[tuple[int, ...]]:
    """Every shortest path ``root -> end``; raises if there are more than ``limit``."""
    if dag.dist[end] < 0:
        raise DisconnectedPairError(f"{end} unreachable from {dag.root}")
    if dag.sigma[end] > limit:
        raise ValueError(f"{dag.sigma[end]:.0f} shortest paths exceed limit {limit}")
    out: list[tuple[int, ...]] = []

    def back(v: int, suffix: list[int]) -> None:
        if v == dag.root:
            out.append(tuple(reversed(suffix + [v])))
            return
        for u in dag.preds(v):
            back(int(u), suffix + [v])

    back(int(end), [])
    out.sort()
    return out


def shortest_path_union(g: Graph, source: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and edge ids lying on at least one shortest source-target path."""
    ds = bfs_dag(g, source)
    if ds.dist[target] < 0:
        raise DisconnectedPairError(f"{source} and {target} are disconnected")
    dt = bfs_dag(g, target)
    total = ds.dist[target]
    on = (ds.dist >= 0) & (ds.dist + dt.dist == total)
    e = g.edges
    a, b = e[:, 0], e[:, 1]
    fwd = on[a] & on[b] & (ds.dist[a] + 1 + dt.dist[b] == total)
    bwd = on[a] & on[b] & (ds.dist[b] + 1 + dt.dist[a] == total)
    return np.flatnonzero(on), np.flatnonzero(fwd | bwd)


def select_paths(g: Graph, source: int, target: int, psc: Psc | str, state: PathState) -> list[ProbePath]:
    """Paths revealed by probing ``source -> target`` under ``psc``."""
    source = _check_vertex(g, source, "source")
    target = _check_vertex(g, target, "target")
    if source == target:
        raise ValueError("source and target must differ")
    psc = Psc.parse(psc)
    if psc is Psc.USP:
        return [ProbePath(tuple(int(v) for v in state.usp_tree(target).route(source)))]
    dag = bfs_dag(g, source)
    if psc is Psc.RSP:
        return [ProbePath(tuple(int(v) for v in sample_shortest_path(dag, target, state.rng)))]
    return [ProbePath(p) for p in enumerate_shortest_paths(dag, target)]
