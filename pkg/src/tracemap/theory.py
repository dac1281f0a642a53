"""Mean-field predictions for discovery probabilities and redundancies.

All predictors take betweenness under the USP/RSP convention; for ASP they
are an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import BetweennessTable
from .explorer import ProbeBudget


def _nonneg(name: str, x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)):
        raise ValueError(f"{name} must be non-negative")
    return a


def _unwrap(a: np.ndarray):
    return float(a) if a.ndim == 0 else a


def predict_edge_discovery(b_rescaled, epsilon):
    """``1 - exp(-eps * b~_ij)``."""
    b = _nonneg("rescaled betweenness", b_rescaled)
    eps = _nonneg("epsilon", epsilon)
    return _unwrap(-np.expm1(-eps * b))


def predict_vertex_discovery(b_rescaled, epsilon, rho_t):
    """``1 - (1 - rho_T) exp(-eps * b~_i)``; never below ``rho_T``."""
    b = _nonneg("rescaled betweenness", b_rescaled)
    eps = _nonneg("epsilon", epsilon)
    rho = np.asarray(rho_t, dtype=float)
    if np.any(rho < 0) or np.any(rho > 1):
        raise ValueError(f"rho_t must lie in [0, 1], got {rho_t}")
    return _unwrap(1.0 - (1.0 - rho) * np.exp(-eps * b))


def predict_discovered_degree(b_rescaled, epsilon):
    """Linearized ``<k*_i> = 2 eps (1 + b~_i)``, valid for ``eps * b~ << 1``."""
    b = _nonneg("rescaled betweenness", b_rescaled)
    eps = _nonneg("epsilon", epsilon)
    return _unwrap(2.0 * eps * (1.0 + b))


def predict_discovered_degree_exact(t: BetweennessTable, epsilon: float) -> np.ndarray:
    """``<k*_i> = sum_j (1 - exp(-eps * b~_ij))`` over the edges at each vertex."""
    p = predict_edge_discovery(t.edge_rescaled, epsilon)
    g = t.graph
    return (np.bincount(g.edges[:, 0], weights=p, minlength=g.n)
            + np.bincount(g.edges[:, 1], weights=p, minlength=g.n))


def predict_redundancies(t: BetweennessTable, rho_s: float, rho_t: float) -> tuple[np.ndarray, np.ndarray]:
    """Mean edge and vertex redundancy from raw betweenness.

    Returns ``(rho_S rho_T b_ij, 2 eps + rho_S rho_T b_i)`` with
    ``eps = N rho_S rho_T``.
    """
    for name, r in (("rho_s", rho_s), ("rho_t", rho_t)):
        if not 0 <= r <= 1:
            raise ValueError(f"{name} must lie in [0, 1], got {r}")
    w = rho_s * rho_t
    eps = t.graph.n * w
    return w * t.edge, 2.0 * eps + w * t.vertex


@dataclass(frozen=True, eq=False)
class TheoryPrediction:
    edge_discovery: np.ndarray
    vertex_discovery: np.ndarray
    discovered_degree: np.ndarray
    discovered_degree_exact: np.ndarray
    edge_redundancy: np.ndarray
    vertex_redundancy: np.ndarray


def predict(t: BetweennessTable, budget: ProbeBudget) -> TheoryPrediction:
    """Every predictor evaluated for one graph and probing budget."""
    eps = budget.epsilon
    r_e, r_n = predict_redundancies(t, budget.rho_s, budget.rho_t)
    return TheoryPrediction(
        edge_discovery=predict_edge_discovery(t.edge_rescaled, eps),
        vertex_discovery=predict_vertex_discovery(t.vertex_rescaled, eps, budget.rho_t),
        discovered_degree=predict_discovered_degree(t.vertex_rescaled, eps),
        discovered_degree_exact=predict_discovered_degree_exact(t, eps),
        edge_redundancy=r_e,
        vertex_redundancy=r_n,
    )
