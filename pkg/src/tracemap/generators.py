"""Erdős–Rényi and configuration-model (Molloy–Reed) graph generators.

Heavy-tailed degree sequences are drawn from a continuous Pareto or Weibull
law rounded to the nearest integer: the mass of degree ``k`` is the
continuous mass on ``[k - 1/2, k + 1/2)``, everything below ``k_min + 1/2``
is lumped onto ``k_min``, and the law is renormalized over
``[k_min, k_max]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .graph import Graph, build_graph


class GenerationError(RuntimeError):
    """A degree sequence could not be realized as a simple graph."""


@dataclass(frozen=True)
class DegreeDistributionSpec:
    """Degree law for configuration-model graphs.

    ``kind="pareto"`` uses ``P(k) ~ k^-gamma`` above a scale of ``k_min``;
    ``kind="weibull"`` uses ``P(k) = (a/c) (k/c)^(a-1) exp(-(k/c)^a)``.
    ``k_max=None`` means ``n - 1`` for the graph being generated.
    """

    kind: Literal["pareto", "weibull"]
    gamma: float = 2.3
    a: float = 0.25
    c: float = 0.6
    k_min: int = 1
    k_max: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("pareto", "weibull"):
            raise ValueError(f"unknown degree law {self.kind!r}")
        if self.kind == "pareto" and not self.gamma > 1:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if self.kind == "weibull" and not (self.a > 0 and self.c > 0):
            raise ValueError(f"weibull needs a > 0 and c > 0, got a={self.a}, c={self.c}")
        if self.k_min < 1:
            raise ValueError(f"k_min must be >= 1, got {self.k_min}")
        if self.k_max is not None and self.k_max < self.k_min:
            raise ValueError(f"k_max={self.k_max} below k_min={self.k_min}")

    @classmethod
    def pareto(cls, gamma: float = 2.3, k_min: int = 1, k_max: int | None = None):
        return cls("pareto", gamma=gamma, k_min=k_min, k_max=k_max)

    @classmethod
    def weibull(cls, a: float = 0.25, c: float = 0.6, k_min: int = 1, k_max: int | None = None):
        return cls("weibull", a=a, c=c, k_min=k_min, k_max=k_max)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "pareto":
            scale = float(self.k_min)
            return np.where(x <= scale, 0.0, 1.0 - (np.maximum(x, scale) / scale) ** (1.0 - self.gamma))
        return np.where(x <= 0, 0.0, -np.expm1(-(np.maximum(x, 0.0) / self.c) ** self.a))

    def resolve_k_max(self, n: int) -> int:
        k_max = n - 1 if self.k_max is None else self.k_max
        if k_max >= n:
            raise ValueError(f"k_max={k_max} must be below n={n}")
        if k_max < self.k_min:
            raise ValueError(f"no admissible degree: k_min={self.k_min}, k_max={k_max}, n={n}")
        return k_max

    def pmf(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Support ``k_min..k_max`` and the normalized probability of each degree."""
        k_max = self.resolve_k_max(n)
        ks = np.arange(self.k_min, k_max + 1)
        upper = self.cdf(ks + 0.5)
        lower = np.concatenate([[0.0], upper[:-1]])
        mass = upper - lower
        total = mass.sum()
        if not total > 0:
            raise ValueError(f"degree law has no mass on [{self.k_min}, {k_max}]")
        return ks, mass / total

    def mean(self, n: int) -> float:
        ks, p = self.pmf(n)
        return float(ks @ p)


def generate_er(n: int, mean_degree: float, seed: int) -> Graph:
    """G(n, p) with ``p = mean_degree / (n - 1)``; the full graph, not its LCC.

    Present pairs are found by geometric skipping over the ``n(n-1)/2``
    upper-triangle slots, which is equivalent to independent coin flips.
    """
    if n < 2 or not 0 < mean_degree < n - 1:
        raise ValueError(f"mean_degree must lie in (0, n-1) with n >= 2, got {mean_degree}, n={n}")
    p = mean_degree / (n - 1)
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    chunk = int(total * p + 10 * math.sqrt(total * p) + 16)
    picks = []
    pos = -1
    while True:
        steps = rng.geometric(p, size=chunk)
        cum = pos + np.cumsum(steps)
        picks.append(cum[cum < total])
        if cum[-1] >= total:
            break
        pos = int(cum[-1])
    flat = np.concatenate(picks)
    rows = np.arange(n, dtype=np.int64)
    # row i of the strict upper triangle starts at i*(2n-i-1)/2
    starts = rows * (2 * n - rows - 1) // 2
    i = np.searchsorted(starts, flat, side="right") - 1
    j = flat - starts[i] + i + 1
    return build_graph(n, np.stack([i, j], axis=1))


def sample_degree_sequence(spec: DegreeDistributionSpec, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` i.i.d. degrees from ``spec`` and make their sum even.

    If the sum is odd, one uniformly chosen vertex with degree below ``k_max``
    gets one extra stub.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    ks, p = spec.pmf(n)
    rng = np.random.default_rng(seed)
    degrees = rng.choice(ks, size=n, p=p).astype(np.int64)
    if degrees.sum() % 2:
        room = np.flatnonzero(degrees < ks[-1])
        if room.size == 0:
            raise GenerationError("cannot fix parity: every vertex is at k_max")
        degrees[rng.choice(room)] += 1
    return degrees


def is_graphical(degrees: np.ndarray) -> bool:
    """Erdős–Gallai test."""
    d = np.sort(np.asarray(degrees, dtype=np.int64))[::-1]
    n = d.size
    if n == 0:
        return True
    if d[-1] < 0 or d.sum() % 2 or d[0] >= n:
        return False
    lhs = np.cumsum(d)
    k = np.arange(1, n + 1)
    # c[k] = #{i : d_i >= k}; positions beyond max(k, c[k]) contribute d_i,
    # positions k+1..c[k] contribute k
    at_least = np.bincount(d, minlength=n + 2)[::-1].cumsum()[::-1]
    c = at_least[np.minimum(k, at_least.size - 1)]
    suffix = np.concatenate([np.cumsum(d[::-1])[::-1], [0]])
    cut = np.maximum(k, c)
    rhs = k * (k - 1) + k * np.maximum(c - k, 0) + suffix[cut]
    return bool(np.all(lhs <= rhs))


def havel_hakimi_edges(degrees) -> np.ndarray:
    """Deterministic simple graph realizing a graphical sequence.

    The vertex with the largest remaining degree is joined to the vertices
    with the next largest remaining degrees (ties by label).
    """
    rem = np.asarray(degrees, dtype=np.int64).copy()
    n = rem.size
    label = np.arange(n)
    out = []
    while True:
        v = int(np.argmax(rem))
        d = int(rem[v])
        if d == 0:
            break
        rem[v] = 0
        # largest remaining degrees first, smallest label among ties
        order = np.lexsort((label, -rem))[:d]
        if rem[order[-1]] <= 0:
            raise GenerationError("degree sequence is not graphical")
        rem[order] -= 1
        out.extend((min(v, int(u)), max(v, int(u))) for u in order)
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def randomize_edges(n: int, edges: np.ndarray, rng: np.random.Generator, attempts: int) -> np.ndarray:
    """Degree-preserving double-edge swaps that keep the graph simple."""
    a = edges[:, 0].tolist()
    b = edges[:, 1].tolist()
    present = {u * n + v for u, v in zip(a, b)}
    m = len(a)
    if m < 2:
        return edges
    picks = rng.integers(m, size=(attempts, 2))
    flips = rng.random(attempts) < 0.5
    for (i, j), flip in zip(picks.tolist(), flips.tolist()):
        if i == j:
            continue
        u, v = a[i], b[i]
        x, y = (b[j], a[j]) if flip else (a[j], b[j])
        if u == x or v == y or u == y or v == x:
            continue
        q1 = min(u, x) * n + max(u, x)
        q2 = min(v, y) * n + max(v, y)
        if q1 in present or q2 in present:
            continue
        present.discard(u * n + v)
        present.discard(min(x, y) * n + max(x, y))
        present.add(q1)
        present.add(q2)
        a[i], b[i] = min(u, x), max(u, x)
        a[j], b[j] = min(v, y), max(v, y)
    return np.stack([np.array(a), np.array(b)], axis=1)


def generate_configuration_model(degrees, seed: int, max_rewire_attempts: int | None = None,
                                 fallback: bool = True) -> Graph:
    """Simple graph with exactly the given degree sequence.

    Stubs are matched uniformly at random; self-loops and repeated edges left
    by the matching are then removed by degree-preserving double-edge swaps
    with uniformly chosen partner edges.

    Sequences close to the graphical boundary (a few hubs that need almost
    every other vertex) can defeat the repair. With ``fallback`` the graph is
    then built by Havel-Hakimi and randomized by ``10 * m`` simple
    double-edge swaps instead.

    Args:
        degrees: Non-negative integers with an even sum, each below ``n``.
        seed: Random seed.
        max_rewire_attempts: Swap attempt budget; defaults to ``100 * m``.
        fallback: Use the Havel-Hakimi construction if repair fails.

    Raises:
        GenerationError: The sequence is not graphical, or repair did not
            finish within the attempt budget and ``fallback`` is off.
    """
    deg = np.asarray(degrees, dtype=np.int64)
    n = deg.size
    if deg.sum() % 2:
        raise GenerationError("degree sum is odd")
    if n and (deg.min() < 0 or deg.max() >= n):
        raise GenerationError("degrees must lie in [0, n)")
    if not is_graphical(deg):
        raise GenerationError("degree sequence is not graphical")
    m = int(deg.sum() // 2)
    budget = 100 * m if max_rewire_attempts is None else int(max_rewire_attempts)
    rng = np.random.default_rng(seed)

    stubs = np.repeat(np.arange(n, dtype=np.int64), deg)
    rng.shuffle(stubs)
    ends = stubs.reshape(-1, 2)
    lo = np.minimum(ends[:, 0], ends[:, 1])
    hi = np.maximum(ends[:, 0], ends[:, 1])

    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    sk = key[order]
    repeat = np.zeros(m, dtype=bool)
    repeat[order[1:]] = sk[1:] == sk[:-1]
    bad = np.flatnonzero((lo == hi) | repeat).tolist()
    if not bad:
        return build_graph(n, np.stack([lo, hi], axis=1))

    uniq, counts = np.unique(key, return_counts=True)
    mult: dict[int, int] = dict(zip(uniq.tolist(), counts.tolist()))
    a = lo.tolist()
    b = hi.tolist()
    attempts = 0
    rng.shuffle(bad)
    while bad:
        idx = bad.pop()
        u, v = a[idx], b[idx]
        if u != v and mult[u * n + v] == 1:
            continue
        while True:
            if attempts >= budget:
                if fallback:
                    edges = randomize_edges(n, havel_hakimi_edges(deg), rng, 10 * m)
                    return build_graph(n, edges)
                raise GenerationError(
                    f"could not remove multi-edges within {budget} swap attempts"
                )
            attempts += 1
            j = int(rng.integers(m))
            if j == idx:
                continue
            x, y = a[j], b[j]
            if rng.random() < 0.5:
                x, y = y, x
            if u == x or v == y:
                continue
            # defect cost: a loop costs 2, each surplus copy of a pair costs 1.
            # Cost-neutral swaps are accepted too: they move a defect off a
            # saturated hub pair to a place where it can be resolved
            p1 = u * n + v
            p2 = min(x, y) * n + max(x, y)
            q1 = min(u, x) * n + max(u, x)
            q2 = min(v, y) * n + max(v, y)
            mult[p1] -= 1
            mult[p2] -= 1
            gain = (2 if u == v else 1) + (2 if x == y else int(mult[p2] >= 1))
            loss = int(mult.get(q1, 0) >= 1) + int(mult.get(q2, 0) + (q1 == q2) >= 1)
            if loss > gain:
                mult[p1] += 1
                mult[p2] += 1
                continue
            for key_old in {p1, p2}:
                if not mult[key_old]:
                    del mult[key_old]
            mult[q1] = mult.get(q1, 0) + 1
            mult[q2] = mult.get(q2, 0) + 1
            a[idx], b[idx] = min(u, x), max(u, x)
            a[j], b[j] = min(v, y), max(v, y)
            if mult[q1] > 1:
                bad.append(idx)
            if mult[q2] > 1:
                bad.append(j)
            break
    return build_graph(n, np.stack([np.array(a), np.array(b)], axis=1))
