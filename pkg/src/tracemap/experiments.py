"""Experiment drivers behind the command line: ε ramps, fixed-ε ρ_T sweeps
and deployment comparisons.

Every random stream comes from the config's master seed through labeled
derivation, and sweep points are independent jobs, so running them in a
worker pool gives the same files as running them in order.
"""

from __future__ import annotations

import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
import numba
import scipy

from . import __version__, io, metrics, theory
from .centrality import BetweennessTable, brandes_betweenness
from .explorer import (
    ProbeBudget,
    monte_carlo_exploration,
    place_low_betweenness,
    place_random,
    run_exploration,
)
from .graph import Graph, is_connected
from .paths import Psc
from .seeding import derive_seed

USP_CAVEAT = (
    "USP routes are correlated through the fixed per-target routing trees, "
    "which tends to hide the source/target exchange symmetry; RSP or ASP show it cleanly."
)
SINGLE_SOURCE_NOTE = (
    "single-source regime (N_S = 1): the sampled degree distribution is expected "
    "to show an apparent k^-1 power law that the underlying graph does not have."
)


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def _floats(text: str) -> tuple[float, ...]:
    """Comma list, or ``logspace:lo:hi:count`` / ``linspace:lo:hi:count``."""
    text = text.strip()
    for kind, fn in (("logspace", np.geomspace), ("linspace", np.linspace)):
        if text.startswith(kind + ":"):
            parts = text.split(":")[1:]
            if len(parts) != 3:
                raise ConfigError(f"expected {kind}:lo:hi:count, got {text!r}")
            try:
                lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            except ValueError:
                raise ConfigError(f"bad number in {text!r}") from None
            if count < 1:
                raise ConfigError(f"grid count must be >= 1 in {text!r}")
            return tuple(float(x) for x in fn(lo, hi, count))
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    Exactly one of the fixed budget (``n_s`` with one or more ``rho_t``) or
    the sweep (``epsilon`` with ``rho_t_grid``) must be given. ``graph`` is
    an edge-list path or a generator spec string such as ``er:n=1000,k=20``.
    """

    graph: str
    seed: int
    psc: Psc = Psc.USP
    n_s: int | None = None
    rho_t: tuple[float, ...] | None = None
    epsilon: float | None = None
    rho_t_grid: tuple[float, ...] | None = None
    strategy: str = "random"
    realizations: int = 10
    out: str = "."
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "psc", Psc.parse(self.psc))
        for key in ("rho_t", "rho_t_grid"):
            if getattr(self, key) is not None:
                object.__setattr__(self, key, tuple(float(x) for x in getattr(self, key)))
        if self.seed is None or int(self.seed) < 0:
            raise ConfigError("seed is mandatory and must be a non-negative integer")
        budget = self.n_s is not None or self.rho_t is not None
        sweep = self.epsilon is not None or self.rho_t_grid is not None
        if budget == sweep:
            raise ConfigError("give exactly one of a fixed budget (n_s, rho_t) "
                              "or a sweep (epsilon, rho_t_grid)")
        if budget and (self.n_s is None or not self.rho_t):
            raise ConfigError("a fixed budget needs both n_s and rho_t")
        if sweep and (self.epsilon is None or not self.rho_t_grid):
            raise ConfigError("a sweep needs both epsilon and rho_t_grid")
        if self.n_s is not None and self.n_s < 1:
            raise ConfigError(f"n_s must be >= 1, got {self.n_s}")
        for r in (self.rho_t or ()) + (self.rho_t_grid or ()):
            if not 0 < r <= 1:
                raise ConfigError(f"rho_t values must lie in (0, 1], got {r}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.strategy not in ("random", "low-betweenness"):
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.realizations < 1:
            raise ConfigError(f"realizations must be >= 1, got {self.realizations}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    @property
    def is_sweep(self) -> bool:
        return self.epsilon is not None

    @classmethod
    def from_mapping(cls, raw: dict[str, str]) -> "ExperimentConfig":
        """Build from string values (config file merged with flags)."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        kw: dict = {}
        try:
            for key, value in raw.items():
                if value is None:
                    continue
                if key in ("seed", "n_s", "realizations", "workers"):
                    kw[key] = int(value)
                elif key == "epsilon":
                    kw[key] = float(value)
                elif key in ("rho_t", "rho_t_grid"):
                    kw[key] = _floats(value)
                elif key == "psc":
                    kw[key] = Psc.parse(value)
                else:
                    kw[key] = str(value)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
        for key in ("graph", "seed"):
            if key not in kw:
                raise ConfigError(f"missing required config key {key!r}")
        return cls(**kw)

    def echo(self) -> dict:
        """Config as plain JSON values; feeding it back reproduces the run."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Psc):
                v = v.value
            elif isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out

    def as_text(self) -> str:
        """Flat ``key = value`` form accepted by :func:`io.parse_config_text`."""
        lines = []
        for key, v in self.echo().items():
            if v is None:
                continue
            if isinstance(v, list):
                v = ",".join(repr(x) for x in v)
            lines.append(f"{key} = {v}")
        return "\n".join(lines) + "\n"


def load_graph(graph: str, seed: int) -> Graph:
    """Read an edge-list file, or generate from a spec string (LCC)."""
    path = Path(graph)
    if path.exists():
        g = io.read_edge_list(path)
    elif ":" in graph:
        g = io.generate_from_spec(graph, derive_seed(seed, "graph"))
    else:
        raise FileNotFoundError(f"graph file not found: {graph}")
    if not is_connected(g):
        raise ConfigError(f"graph {graph!r} is not connected; use its largest component")
    return g


def runtime_metadata() -> dict:
    """Environment facts that affect results; no timestamps, so reports
    stay byte-identical across reruns."""
    return {
        "tracemap": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
    }


def _mean_se(values: list[float]) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    se = float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
    return float(a.mean()), se


def summarize(mc) -> dict:
    """Realization means and standard errors of N*/N, E*/E and k̄*/k̄."""
    out = {}
    for key in ("vertex_fraction", "edge_fraction", "degree_ratio"):
        mean, se = _mean_se([s[key] for s in mc.summaries])
        out[key] = mean
        out[key + "_se"] = se
    return out


def log_bin_spectrum(s: metrics.DegreeSpectrum, bins_per_decade: int = 5) -> metrics.DegreeSpectrum:
    """Population-weighted means over logarithmic degree bins.

    Presentation only: the bin's degree is the population-weighted mean
    degree, rounded.
    """
    if len(s) == 0:
        return s
    edges = np.floor(np.log10(s.degrees) * bins_per_decade).astype(np.int64)
    _, idx = np.unique(edges, return_inverse=True)
    pop = np.bincount(idx, weights=s.populations)
    val = np.bincount(idx, weights=s.values * s.populations) / pop
    deg = np.rint(np.bincount(idx, weights=s.degrees * s.populations) / pop).astype(np.int64)
    return metrics.DegreeSpectrum(deg, val, pop.astype(np.int64))


# -- explore -----------------------------------------------------------------


def _budget(g: Graph, n_s: int, rho_t: float) -> ProbeBudget:
    n_t = int(round(rho_t * g.n))
    if n_t < 1:
        raise ConfigError(f"rho_t={rho_t} gives no target on n={g.n}")
    if n_s + n_t > g.n:
        raise ConfigError(f"n_s + n_t = {n_s + n_t} exceeds n = {g.n}")
    return ProbeBudget(g.n, n_s, n_t)


def explore_point(g: Graph, bt: BetweennessTable, config: ExperimentConfig, index: int,
                  out_dir: Path, log_bins: int = 0) -> dict:
    """One fixed-budget Monte Carlo run plus a single-realization snapshot.

    Writes counters, spectra, overlays and the sampled edge list under
    ``out_dir`` and returns the report dictionary.
    """
    rho_t = config.rho_t[index]
    budget = _budget(g, config.n_s, rho_t)
    point_seed = derive_seed(config.seed, "explore-point", index)
    mc = monte_carlo_exploration(
        g, budget, config.psc, config.strategy, config.realizations,
        point_seed, betweenness=bt,
    )
    if config.strategy == "low-betweenness":
        placement = place_low_betweenness(g, bt, budget.n_s, budget.n_t)
    else:
        placement = place_random(g, budget.n_s, budget.n_t, derive_seed(point_seed, "snapshot"))
    snap = run_exploration(g, placement, config.psc, derive_seed(point_seed, "snapshot-probes"))
    pred = theory.predict(bt, budget)
    deg = g.degrees

    prefix = f"point{index:02d}"
    files: list[dict] = []

    def add(name: str, kind: str) -> Path:
        files.append({"kind": kind, "path": f"{prefix}_{name}"})
        return out_dir / f"{prefix}_{name}"

    io.write_counters_csv(g, mc.r_n, mc.r_e, add("vertex_counters.csv", "counters"),
                          add("edge_counters.csv", "counters"))
    io.write_sampled_edge_list(snap, add("sampled_graph.txt", "edge-list"))

    spectra = {
        "discovery_fraction": metrics.discovery_fraction_by_degree(g, mc),
        "degree_ratio": metrics.discovered_degree_ratio(g, mc),
        "vertex_redundancy": metrics.spectrum(deg, mc.r_n),
        "vertex_redundancy_theory": metrics.spectrum(deg, pred.vertex_redundancy),
        "discovery_theory": metrics.spectrum(deg, pred.vertex_discovery),
    }
    y2 = metrics.participation_ratio(snap)
    ent = metrics.transit_entropy(snap)
    spectra["y2_by_degree"] = y2.by_degree
    spectra["y2_by_discovered_degree"] = y2.by_discovered_degree
    spectra["entropy_by_degree"] = ent.by_degree
    for name, s in spectra.items():
        io.write_spectrum_csv(s, add(f"spectrum_{name}.csv", "spectrum"), name)
        if log_bins > 0:
            io.write_spectrum_csv(log_bin_spectrum(s, log_bins),
                                  add(f"spectrum_{name}_logbinned.csv", "spectrum"), name)

    dist = metrics.sampled_degree_distribution(snap)
    io.write_csv(add("sampled_degree_distribution.csv", "distribution"), ["k", "pmf", "ccdf"],
                 zip(dist.k, dist.pmf, dist.ccdf))

    overlays = {}
    for name, ids, obs, expect in (
        ("vertex_discovery", range(g.n), mc.pi_vertex, pred.vertex_discovery),
        ("edge_discovery", range(g.m), mc.pi_edge, pred.edge_discovery),
        ("vertex_redundancy", range(g.n), mc.r_n, pred.vertex_redundancy),
        ("edge_redundancy", range(g.m), mc.r_e, pred.edge_redundancy),
        ("discovered_degree", range(g.n), mc.k_star, pred.discovered_degree_exact),
    ):
        overlays[name] = io.write_overlay_csv(add(f"overlay_{name}.csv", "overlay"), ids, obs, expect)

    report = {
        "schema_version": io.SCHEMA_VERSION,
        "command": "explore",
        "config": config.echo(),
        "point": {"index": index, **budget.as_dict()},
        "summary": summarize(mc),
        "snapshot": {
            **metrics.summary(g, snap),
            "skipped_pairs": snap.skipped_pairs,
            "y2_excluded": y2.excluded,
            "entropy_excluded": ent.excluded,
        },
        "overlay_residuals": overlays,
        "manifest": files,
        "notes": [SINGLE_SOURCE_NOTE] if budget.n_s == 1 else [],
        "flags": {"single_source": budget.n_s == 1},
        "runtime": runtime_metadata(),
    }
    if config.psc is Psc.ASP:
        report["notes"].append("theory overlays assume one path per pair; ASP is approximate")
    io.write_json(report, out_dir / f"{prefix}_report.json")
    return report


def explore(config: ExperimentConfig, log_bins: int = 0) -> list[dict]:
    """Fixed-budget experiment: one report per ``rho_t`` of the ramp."""
    if config.is_sweep:
        raise ConfigError("explore needs a fixed budget (n_s, rho_t), not a sweep")
    g = load_graph(config.graph, config.seed)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in config.rho_t:
        _budget(g, config.n_s, r)
    bt = brandes_betweenness(g)
    return [explore_point(g, bt, config, i, out_dir, log_bins) for i in range(len(config.rho_t))]


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    rho_t: float
    n_s: int
    n_t: int

    @property
    def epsilon_prime(self) -> float:
        """``round(eps / rho_T) * rho_T``: the probe density after rounding N_S."""
        return self.n_s * self.rho_t

    def budget(self, n: int) -> ProbeBudget:
        return ProbeBudget(n, self.n_s, self.n_t)


def sweep_points(n: int, epsilon: float, grid) -> tuple[list[SweepPoint], list[dict]]:
    """Feasible grid points at fixed ε and the dropped ones with reasons.

    ``N_S = round(eps / rho_T)`` clipped to at least 1, ``N_T = round(rho_T N)``.
    """
    kept, dropped = [], []
    for r in grid:
        n_s = max(1, int(round(epsilon / r)))
        n_t = int(round(r * n))
        if n_t < 1:
            dropped.append({"rho_t": r, "reason": "N_T rounds to 0"})
        elif n_s + n_t > n:
            dropped.append({"rho_t": r, "reason": f"N_S + N_T = {n_s + n_t} exceeds N = {n}"})
        else:
            kept.append(SweepPoint(float(r), n_s, n_t))
    if not kept:
        raise ConfigError(f"no feasible grid point for epsilon={epsilon} on n={n}")
    return kept, dropped


def _sweep_job(args) -> dict:
    g, point, index, psc, strategy, realizations, seed, bt = args
    mc = monte_carlo_exploration(
        g, point.budget(g.n), psc, strategy, realizations,
        derive_seed(seed, "sweep-point", index), betweenness=bt,
    )
    return summarize(mc)


def _run_points(g: Graph, points, config: ExperimentConfig, strategy: str,
                bt: BetweennessTable | None) -> list[dict]:
    jobs = [(g, p, i, config.psc, strategy, config.realizations, config.seed, bt)
            for i, p in enumerate(points)]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_sweep_job, jobs))
    return [_sweep_job(j) for j in jobs]


def estimate_extremum(x, y) -> dict:
    """Interior extremum of ``y`` over a log-spaced ``x`` grid.

    The extreme grid point that lies inside the grid is refined by a
    parabola through it and its neighbors in ``log x``. Returns
    ``{"kind", "rho_t"}`` or ``{"kind": None}`` if both extremes sit on the
    grid boundary.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        return {"kind": None, "rho_t": None}
    candidates = []
    for kind, i in (("max", int(np.argmax(y))), ("min", int(np.argmin(y)))):
        if 0 < i < x.size - 1:
            depth = abs(y[i] - 0.5 * (y[0] + y[-1]))
            candidates.append((depth, kind, i))
    if not candidates:
        return {"kind": None, "rho_t": None}
    _, kind, i = max(candidates)
    lx = np.log(x[i - 1 : i + 2])
    a, b, _ = np.polyfit(lx, y[i - 1 : i + 2], 2)
    peak = -b / (2 * a) if a != 0 else lx[1]
    peak = float(np.clip(peak, lx[0], lx[2]))
    return {"kind": kind, "rho_t": float(np.exp(peak)), "grid_rho_t": float(x[i])}


def _row(point: SweepPoint, n: int) -> dict:
    return {
        "rho_t": point.rho_t, "n_s": point.n_s, "n_t": point.n_t,
        "epsilon_prime": point.epsilon_prime, "epsilon_realized": point.n_s * point.n_t / n,
    }


SWEEP_COLUMNS = ["rho_t", "n_s", "n_t", "epsilon_prime", "epsilon_realized",
                 "vertex_fraction", "vertex_fraction_se", "edge_fraction", "edge_fraction_se",
                 "degree_ratio", "degree_ratio_se"]


def symmetry_sweep(config: ExperimentConfig) -> dict:
    """Fixed-ε sweep over ρ_T; writes ``sweep.csv`` and ``sweep_report.json``."""
    if not config.is_sweep:
        raise ConfigError("symmetry-sweep needs epsilon and rho_t_grid")
    g = load_graph(config.graph, config.seed)
    points, dropped = sweep_points(g.n, config.epsilon, config.rho_t_grid)
    bt = brandes_betweenness(g) if config.strategy == "low-betweenness" else None
    results = _run_points(g, points, config, config.strategy, bt)
    rows = [{**_row(p, g.n), **res} for p, res in zip(points, results)]
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_csv(out_dir / "sweep.csv", SWEEP_COLUMNS, ([r[c] for c in SWEEP_COLUMNS] for r in rows))
    sym = math.sqrt(config.epsilon / g.n)
    x = [r["rho_t"] for r in rows]
    report = {
        "schema_version": io.SCHEMA_VERSION,
        "command": "symmetry-sweep",
        "config": config.echo(),
        "graph": {"n": g.n, "m": g.m},
        "symmetry_point": sym,
        "extremum": {
            "vertex_fraction": estimate_extremum(x, [r["vertex_fraction"] for r in rows]),
            "edge_fraction": estimate_extremum(x, [r["edge_fraction"] for r in rows]),
        },
        "dropped_points": dropped,
        "manifest": [{"kind": "sweep", "path": "sweep.csv"}],
        "notes": [USP_CAVEAT],
        "runtime": runtime_metadata(),
    }
    io.write_json(report, out_dir / "sweep_report.json")
    return report


COMPARE_METRICS = ("vertex_fraction", "edge_fraction", "degree_ratio")


def compare_deployment(config: ExperimentConfig) -> dict:
    """Random vs low-betweenness deployment on the same fixed-ε grid.

    Writes ``compare.csv`` with paired rows and ``low - random`` difference
    columns, plus ``compare_report.json``.
    """
    if not config.is_sweep:
        raise ConfigError("compare-deployment needs epsilon and rho_t_grid")
    g = load_graph(config.graph, config.seed)
    points, dropped = sweep_points(g.n, config.epsilon, config.rho_t_grid)
    bt = brandes_betweenness(g)
    random_res = _run_points(g, points, config, "random", bt)
    low_res = _run_points(g, points, config, "low-betweenness", bt)
    header = ["rho_t", "n_s", "n_t", "epsilon_prime", "epsilon_realized"]
    for key in COMPARE_METRICS:
        header += [f"random_{key}", f"random_{key}_se", f"low_{key}", f"low_{key}_se", f"diff_{key}"]
    rows = []
    for p, rr, lr in zip(points, random_res, low_res):
        row = _row(p, g.n)
        for key in COMPARE_METRICS:
            row.update({
                f"random_{key}": rr[key], f"random_{key}_se": rr[key + "_se"],
                f"low_{key}": lr[key], f"low_{key}_se": lr[key + "_se"],
                f"diff_{key}": lr[key] - rr[key],
            })
        rows.append(row)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_csv(out_dir / "compare.csv", header, ([r[c] for c in header] for r in rows))
    report = {
        "schema_version": io.SCHEMA_VERSION,
        "command": "compare-deployment",
        "config": config.echo(),
        "graph": {"n": g.n, "m": g.m},
        "symmetry_point": math.sqrt(config.epsilon / g.n),
        "low_betweenness_wins": {
            key: all(r[f"diff_{key}"] > 0 for r in rows) for key in COMPARE_METRICS
        },
        "dropped_points": dropped,
        "manifest": [{"kind": "sweep", "path": "compare.csv"}],
        "notes": [USP_CAVEAT],
        "runtime": runtime_metadata(),
    }
    io.write_json(report, out_dir / "compare_report.json")
    return report
