"""Observables of a sampled graph compared with its underlying graph.

Spectra are reported per exact degree together with the number of vertices
behind each value; empty degree classes are omitted. Functions taking a
``sampled`` argument accept either one :class:`SampledGraph` or a
:class:`MonteCarloResult`, in which case per-vertex realization means are
used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .explorer import MonteCarloResult, ProbeBudget, SampledGraph
from .graph import Graph


class EmptySampleError(ValueError):
    """The experiment probed no source-target pair."""


@dataclass(frozen=True, eq=False)
class DegreeSpectrum:
    degrees: np.ndarray
    values: np.ndarray
    populations: np.ndarray

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(v) for k, v in zip(self.degrees, self.values)}

    def __len__(self) -> int:
        return int(self.degrees.size)


def spectrum(degrees: np.ndarray, values: np.ndarray, mask: np.ndarray | None = None) -> DegreeSpectrum:
    """Mean of ``values`` over vertices of each degree (restricted to ``mask``)."""
    degrees = np.asarray(degrees, dtype=np.int64)
    values = np.asarray(values, dtype=float)
    if mask is not None:
        degrees, values = degrees[mask], values[mask]
    if degrees.size == 0:
        return DegreeSpectrum(np.zeros(0, np.int64), np.zeros(0), np.zeros(0, np.int64))
    pop = np.bincount(degrees)
    tot = np.bincount(degrees, weights=values, minlength=pop.size)
    ks = np.flatnonzero(pop)
    return DegreeSpectrum(ks, tot[ks] / pop[ks], pop[ks])


def _require_probes(sampled) -> None:
    if isinstance(sampled, SampledGraph) and sampled.probes == 0:
        raise EmptySampleError("nothing sampled: the experiment probed no pair")


def discovery_fraction_by_degree(g: Graph, sampled: SampledGraph | MonteCarloResult) -> DegreeSpectrum:
    """``N*_k / N_k`` for every degree class of the underlying graph."""
    _require_probes(sampled)
    found = sampled.vertex_mask if isinstance(sampled, SampledGraph) else sampled.pi_vertex
    return spectrum(g.degrees, found)


def discovered_degree_ratio(g: Graph, sampled: SampledGraph | MonteCarloResult) -> DegreeSpectrum:
    """Mean ``k*_i / k_i`` over discovered vertices of each true degree.

    For Monte Carlo results ``k*_i`` is averaged over the realizations in
    which ``i`` was discovered.
    """
    _require_probes(sampled)
    deg = g.degrees
    if isinstance(sampled, SampledGraph):
        mask = sampled.vertex_mask
        k_star = sampled.discovered_degree.astype(float)
    else:
        mask = sampled.pi_vertex > 0
        k_star = np.zeros(g.n)
        k_star[mask] = sampled.k_star[mask] / sampled.pi_vertex[mask]
    mask = mask & (deg > 0)
    ratio = np.zeros(g.n)
    ratio[mask] = k_star[mask] / deg[mask]
    return spectrum(deg, ratio, mask)


@dataclass(frozen=True, eq=False)
class ParticipationRatio:
    """Per-vertex ``Y2`` (NaN where undefined) and its spectra."""

    y2: np.ndarray
    excluded: int
    by_degree: DegreeSpectrum
    by_discovered_degree: DegreeSpectrum


def participation_ratio(sampled: SampledGraph) -> ParticipationRatio:
    """``Y2(i) = sum_j f_j^2`` with ``f_j = r_e(i,j) / sum_j r_e(i,j)``.

    Vertices whose incident edges were never traversed are excluded.
    """
    g = sampled.graph
    r = sampled.r_e.astype(float)
    a, b = g.edges[:, 0], g.edges[:, 1]
    s1 = np.bincount(a, weights=r, minlength=g.n) + np.bincount(b, weights=r, minlength=g.n)
    s2 = np.bincount(a, weights=r * r, minlength=g.n) + np.bincount(b, weights=r * r, minlength=g.n)
    ok = s1 > 0
    y2 = np.full(g.n, np.nan)
    y2[ok] = s2[ok] / s1[ok] ** 2
    k_star = sampled.discovered_degree
    return ParticipationRatio(
        y2=y2,
        excluded=int((sampled.vertex_mask & ~ok).sum()),
        by_degree=spectrum(g.degrees, y2, ok),
        by_discovered_degree=spectrum(k_star, y2, ok),
    )


@dataclass(frozen=True, eq=False)
class TransitEntropy:
    """Per-vertex normalized transit entropy (NaN where undefined)."""

    h: np.ndarray
    excluded: int
    by_degree: DegreeSpectrum


def transit_entropy(sampled: SampledGraph) -> TransitEntropy:
    """Normalized entropy of ordered edge-pair transits at each vertex.

    ``h_i = -sum f log f / log(k*_i (k*_i - 1))`` over the frequencies ``f``
    of the ``(k, j)`` pairs recorded at ``i``. A vertex with a single used
    pair scores 0. Vertices without transits are excluded.
    """
    g = sampled.graph
    n = g.n
    w = sampled.transit_weights
    owner = sampled.transit_keys // (n * n)
    total = np.bincount(owner, weights=w, minlength=n)
    f = w / total[owner]
    plogp = np.bincount(owner, weights=f * np.log(f), minlength=n)
    k_star = sampled.discovered_degree
    ok = (total > 0) & (k_star >= 2)
    h = np.full(n, np.nan)
    h[ok] = -plogp[ok] / np.log(k_star[ok] * (k_star[ok] - 1.0))
    h[ok] = np.clip(h[ok], 0.0, 1.0)
    return TransitEntropy(
        h=h,
        excluded=int((sampled.vertex_mask & ~ok).sum()),
        by_degree=spectrum(g.degrees, h, ok),
    )


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Empirical law of discovered degrees ``k*`` over discovered vertices.

    ``ccdf[a]`` is the fraction of discovered vertices with ``k* >= k[a]``.
    """

    k: np.ndarray
    pmf: np.ndarray
    ccdf: np.ndarray


def degree_distribution(degrees: np.ndarray) -> DegreeDistribution:
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size == 0:
        raise EmptySampleError("no vertices")
    counts = np.bincount(degrees)
    ks = np.flatnonzero(counts)
    pmf = counts[ks] / degrees.size
    ccdf = pmf[::-1].cumsum()[::-1]
    return DegreeDistribution(ks, pmf, ccdf)


def sampled_degree_distribution(sampled: SampledGraph) -> DegreeDistribution:
    _require_probes(sampled)
    return degree_distribution(sampled.discovered_degree[sampled.vertex_mask])


def loglog_slope(dist: DegreeDistribution, k_lo: float, k_hi: float) -> float:
    """Least-squares slope of ``log pmf`` vs ``log k`` on ``[k_lo, k_hi]``."""
    sel = (dist.k >= k_lo) & (dist.k <= k_hi) & (dist.pmf > 0)
    if sel.sum() < 2:
        raise ValueError(f"fewer than two degree classes in [{k_lo}, {k_hi}]")
    return float(np.polyfit(np.log(dist.k[sel]), np.log(dist.pmf[sel]), 1)[0])


def semilog_fit(dist: DegreeDistribution, k_lo: float, k_hi: float) -> tuple[float, float]:
    """Fit ``ccdf = a + b ln k`` on ``[k_lo, k_hi]``; return ``(b, R^2)``."""
    sel = (dist.k >= k_lo) & (dist.k <= k_hi)
    if sel.sum() < 3:
        raise ValueError(f"fewer than three degree classes in [{k_lo}, {k_hi}]")
    x, y = np.log(dist.k[sel]), dist.ccdf[sel]
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    r2 = 1.0 - resid @ resid / ((y - y.mean()) @ (y - y.mean()))
    return float(slope), float(r2)


def summary(g: Graph, sampled: SampledGraph, budget: ProbeBudget | None = None) -> dict:
    """Discovered fractions ``N*/N``, ``E*/E`` and the mean-degree ratio."""
    _require_probes(sampled)
    n_star, e_star = sampled.n_vertices, sampled.n_edges
    out = {
        "vertex_fraction": n_star / g.n,
        "edge_fraction": e_star / g.m,
        "degree_ratio": (2.0 * e_star / n_star) / (2.0 * g.m / g.n),
    }
    if budget is not None:
        out.update(epsilon=budget.epsilon, rho_t=budget.rho_t, n_s=budget.n_s)
    return out
