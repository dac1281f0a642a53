"""File formats and text parsers.

* Edge lists: a header ``# n=<N> m=<M>`` then one ``i j`` line per edge with
  ``i < j``, sorted. This is the interchange format between commands.
* CSV files always start with a header row naming the columns.
* JSON reports carry a ``schema_version`` field.
* Config files are flat ``key = value`` text; ``#`` starts a comment.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .centrality import BetweennessTable
from .explorer import SampledGraph
from .generators import (
    DegreeDistributionSpec,
    GenerationError,
    generate_configuration_model,
    generate_er,
    is_graphical,
    sample_degree_sequence,
)
from .graph import Graph, GraphError, build_graph, largest_connected_component
from .metrics import DegreeSpectrum
from .seeding import derive_seed

SCHEMA_VERSION = 1

_HEADER = re.compile(r"#\s*n=(\d+)\s+m=(\d+)\s*$")


class FormatError(ValueError):
    """A spec string, config file or report does not follow its grammar."""


class EdgeListError(ValueError):
    """An edge-list file is malformed."""


# -- edge lists --------------------------------------------------------------


def format_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n} m={g.m}"]
    lines.extend(f"{i} {j}" for i, j in g.edges.tolist())
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="ascii")


def read_edge_list(path: str | Path) -> Graph:
    """Parse an edge-list file; edges may appear in any order."""
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise EdgeListError(f"{path}: empty file")
    head = _HEADER.match(lines[0])
    if head is None:
        raise EdgeListError(f"{path}:1: expected header '# n=<N> m=<M>', got {lines[0]!r}")
    n, m = int(head.group(1)), int(head.group(2))
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise EdgeListError(f"{path}:{lineno}: expected 'i j', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if len(edges) != m:
        raise EdgeListError(f"{path}: header says m={m} but {len(edges)} edges follow")
    try:
        return build_graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))
    except GraphError as exc:
        raise EdgeListError(f"{path}: {exc}") from None


def write_sampled_edge_list(sampled: SampledGraph, path: str | Path) -> None:
    """The discovered edges, with the labels of the underlying graph."""
    g = sampled.graph
    write_edge_list(build_graph(g.n, sampled.discovered_edges), path)


# -- CSV ---------------------------------------------------------------------


def write_csv(path: str | Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(x) for x in row])


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: missing header row")
    return rows[0], rows[1:]


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_betweenness_csv(t: BetweennessTable, vertex_path, edge_path) -> None:
    g = t.graph
    write_csv(vertex_path, ["vertex", "degree", "b", "b_rescaled"],
              zip(range(g.n), g.degrees, t.vertex, t.vertex_rescaled))
    write_csv(edge_path, ["i", "j", "b", "b_rescaled"],
              zip(g.edges[:, 0], g.edges[:, 1], t.edge, t.edge_rescaled))


def write_counters_csv(g: Graph, r_n: np.ndarray, r_e: np.ndarray, vertex_path, edge_path) -> None:
    """Vertex and edge redundancies (realization means are written as floats)."""
    write_csv(vertex_path, ["vertex", "r_n"], zip(range(g.n), r_n))
    write_csv(edge_path, ["i", "j", "r_e"], zip(g.edges[:, 0], g.edges[:, 1], r_e))


def write_spectrum_csv(s: DegreeSpectrum, path, value_name: str = "value") -> None:
    write_csv(path, ["k", value_name, "population"], zip(s.degrees, s.values, s.populations))


def overlay_rows(ids, observed, predicted):
    observed = np.asarray(observed, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    resid = observed - predicted
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(predicted != 0, resid / predicted, np.nan)
    return zip(ids, observed, predicted, np.abs(resid), rel)


def write_overlay_csv(path, ids, observed, predicted) -> dict:
    """Observed vs predicted with residuals; returns residual statistics."""
    write_csv(path, ["id", "observed", "predicted", "abs_residual", "rel_residual"],
              overlay_rows(ids, observed, predicted))
    return residual_stats(observed, predicted)


def residual_stats(observed, predicted) -> dict:
    observed = np.asarray(observed, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    resid = np.abs(observed - predicted)
    ok = predicted != 0
    rel = resid[ok] / np.abs(predicted[ok])
    return {
        "count": int(observed.size),
        "max_abs": float(resid.max()) if resid.size else 0.0,
        "mean_abs": float(resid.mean()) if resid.size else 0.0,
        "max_rel": float(rel.max()) if rel.size else 0.0,
        "mean_rel": float(rel.mean()) if rel.size else 0.0,
    }


# -- JSON --------------------------------------------------------------------


def write_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_report(path: str | Path) -> dict:
    report = json.loads(Path(path).read_text(encoding="utf-8"))
    if report.get("schema_version") != SCHEMA_VERSION:
        raise FormatError(f"{path}: unsupported schema_version {report.get('schema_version')!r}")
    return report


# -- config ------------------------------------------------------------------


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if not key:
            raise FormatError(f"{source}:{lineno}: empty key")
        if key in out:
            raise FormatError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key.replace("-", "_")] = value
    return out


def read_config(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"), str(path))


# -- graph spec strings ------------------------------------------------------


@dataclass(frozen=True)
class GraphSpec:
    """Parsed ``family:key=value,...`` generator string."""

    family: str
    n: int
    params: dict

    def __str__(self) -> str:
        rest = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}:n={self.n}" + (f",{rest}" if rest else "")


_FAMILIES = {
    "er": {"k": float},
    "rsf": {"gamma": float, "kmin": int, "kmax": int},
    "wei": {"a": float, "c": float, "kmin": int, "kmax": int},
}
_REQUIRED = {"er": ("k",), "rsf": (), "wei": ()}


def parse_graph_spec(text: str) -> GraphSpec:
    """Parse ``er:n=10000,k=20``, ``rsf:n=10000,gamma=2.3`` or
    ``wei:n=10000,a=0.25,c=0.6``. Error messages quote the offending token."""
    family, sep, rest = text.strip().partition(":")
    if not sep or family not in _FAMILIES:
        raise FormatError(f"unknown graph family {family!r} in {text!r} (expected er, rsf or wei)")
    allowed = _FAMILIES[family]
    n = None
    params: dict = {}
    for token in rest.split(","):
        key, eq, value = token.partition("=")
        key = key.strip()
        if not eq or not key or not value.strip():
            raise FormatError(f"malformed token {token!r} in {text!r}")
        if key == "n":
            kind = int
        elif key in allowed:
            kind = allowed[key]
        else:
            raise FormatError(f"unknown parameter {key!r} in token {token!r} for family {family!r}")
        try:
            val = kind(value.strip())
        except ValueError:
            raise FormatError(f"bad value in token {token!r}: expected {kind.__name__}") from None
        if key == "n":
            n = val
        elif key in params:
            raise FormatError(f"repeated token {token!r}")
        else:
            params[key] = val
    if n is None:
        raise FormatError(f"missing n in {text!r}")
    if n < 2:
        raise FormatError(f"token 'n={n}': need at least 2 vertices")
    for key in _REQUIRED[family]:
        if key not in params:
            raise FormatError(f"missing {key} in {text!r}")
    return GraphSpec(family, n, params)


def degree_spec(spec: GraphSpec) -> DegreeDistributionSpec:
    p = spec.params
    k_min, k_max = p.get("kmin", 1), p.get("kmax")
    if spec.family == "rsf":
        return DegreeDistributionSpec.pareto(p.get("gamma", 2.3), k_min, k_max)
    return DegreeDistributionSpec.weibull(p.get("a", 0.25), p.get("c", 0.6), k_min, k_max)


def generate_from_spec(spec: GraphSpec | str, seed: int, max_sequence_draws: int = 1000) -> Graph:
    """Generate the graph a spec string describes and return its LCC.

    Configuration-model graphs redraw the degree sequence when it is not
    graphical (heavy tails can put too many hubs near ``n - 1``).
    """
    if isinstance(spec, str):
        spec = parse_graph_spec(spec)
    if spec.family == "er":
        g = generate_er(spec.n, spec.params["k"], derive_seed(seed, "er"))
    else:
        law = degree_spec(spec)
        for attempt in range(max_sequence_draws):
            degrees = sample_degree_sequence(law, spec.n, derive_seed(seed, "degree-sequence", attempt))
            if is_graphical(degrees):
                break
        else:
            raise GenerationError(f"no graphical degree sequence in {max_sequence_draws} draws")
        g = generate_configuration_model(degrees, derive_seed(seed, "configuration-model", attempt))
    return largest_connected_component(g)[0]
