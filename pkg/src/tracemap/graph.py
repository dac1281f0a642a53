"""Immutable simple undirected graphs in compressed sparse row form.

Vertices are dense integer labels ``0..n-1``. Every graph stores both a CSR
adjacency (``indptr``/``indices``, neighbor lists sorted ascending) and the
canonical edge array ``edges`` of shape ``(m, 2)`` with ``i < j``, sorted
lexicographically. ``slot_edge[p]`` gives the edge id of CSR slot ``p`` so
per-edge quantities (betweenness, redundancy) can be stored as flat arrays
aligned with ``edges``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class GraphError(ValueError):
    """Raised when an edge list does not describe a valid simple graph."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    slot_edge: np.ndarray
    edges: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.n)]

    def edge_id(self, i: int, j: int) -> int:
        """Index of edge ``{i, j}`` in ``edges``; raises KeyError if absent."""
        row = self.neighbors(i)
        p = int(np.searchsorted(row, j))
        if p >= row.size or row[p] != j:
            raise KeyError((i, j))
        return int(self.slot_edge[self.indptr[i] + p])

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        p = int(np.searchsorted(row, j))
        return p < row.size and row[p] == j

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _from_canonical(n: int, edges: np.ndarray) -> Graph:
    """Build a Graph from edges already validated, with i < j and sorted."""
    m = edges.shape[0]
    eid = np.arange(m, dtype=np.int64)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    ids = np.concatenate([eid, eid])
    order = np.lexsort((cols, rows))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return Graph(
        n=int(n),
        indptr=_frozen(indptr),
        indices=_frozen(cols[order].astype(np.int64)),
        slot_edge=_frozen(ids[order]),
        edges=_frozen(edges.astype(np.int64)),
    )


def build_graph(n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> Graph:
    """Construct a canonical simple graph.

    Args:
        n: Number of vertices; labels are ``0..n-1``.
        edges: Vertex pairs in any orientation and order.

    Raises:
        GraphError: On an out-of-range endpoint, a self-loop or a duplicate
            edge (``(i, j)`` and ``(j, i)`` count as the same edge).
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                     dtype=np.int64)
    arr = arr.reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        bad = arr[(arr < 0).any(axis=1) | (arr >= n).any(axis=1)][0]
        raise GraphError(f"endpoint out of range [0, {n}): {tuple(bad)}")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        raise GraphError(f"self-loop at vertex {int(arr[loops][0, 0])}")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    order = np.lexsort((hi, lo))
    canon = np.stack([lo[order], hi[order]], axis=1)
    if canon.shape[0] > 1:
        dup = np.all(canon[1:] == canon[:-1], axis=1)
        if dup.any():
            raise GraphError(f"duplicate edge {tuple(canon[1:][dup][0])}")
    return _from_canonical(n, canon)


def induced_subgraph(g: Graph, vertices: np.ndarray) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by ``vertices``, relabeled in ascending original order.

    Returns the subgraph and ``mapping`` with ``mapping[new] = old``.
    """
    keep = np.zeros(g.n, dtype=bool)
    keep[np.asarray(vertices, dtype=np.int64)] = True
    mapping = np.flatnonzero(keep)
    relabel = np.full(g.n, -1, dtype=np.int64)
    relabel[mapping] = np.arange(mapping.size)
    e = g.edges
    sel = keep[e[:, 0]] & keep[e[:, 1]]
    # monotone relabeling keeps the lexicographic order of the edge array
    return _from_canonical(mapping.size, relabel[e[sel]]), mapping


def component_labels(g: Graph) -> np.ndarray:
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    adj = csr_matrix(
        (np.ones(g.indices.size, dtype=np.int8), g.indices, g.indptr), shape=(g.n, g.n)
    )
    _, labels = connected_components(adj, directed=False)
    return labels.astype(np.int64)


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or int(component_labels(g).max()) == 0


def largest_connected_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Largest connected component and its ``new -> original`` label map.

    Ties between equally large components go to the one containing the
    smallest original label.
    """
    if g.n == 0:
        return g, np.zeros(0, dtype=np.int64)
    labels = component_labels(g)
    sizes = np.bincount(labels)
    first = np.full(sizes.size, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    best = np.flatnonzero(sizes == sizes.max())
    winner = best[np.argmin(first[best])]
    return induced_subgraph(g, np.flatnonzero(labels == winner))


def degree_histogram(g: Graph) -> dict[int, int]:
    """Map each occurring degree ``k`` to the number of vertices ``N_k``."""
    counts = np.bincount(g.degrees)
    ks = np.flatnonzero(counts)
    return {int(k): int(counts[k]) for k in ks}
