"""Command-line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import io
from .centrality import DisconnectedGraphError, brandes_betweenness, sum_rule_residual
from .experiments import (
    ConfigError,
    ExperimentConfig,
    compare_deployment,
    explore,
    symmetry_sweep,
)
from .generators import GenerationError

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _experiment_args(p: argparse.ArgumentParser, sweep: bool) -> None:
    p.add_argument("graph", nargs="?", help="edge-list file (or a generator spec string)")
    p.add_argument("--config", help="flat key = value config file; flags override it")
    p.add_argument("--seed", help="master seed (mandatory here or in the config)")
    p.add_argument("--psc", help="path selection criterion: USP (default), RSP or ASP")
    p.add_argument("--realizations", help="Monte Carlo realizations per point (default 10)")
    p.add_argument("--out", help="output directory (default: current directory)")
    if sweep:
        p.add_argument("--epsilon", help="fixed probe density")
        p.add_argument("--rho-t-grid", dest="rho_t_grid",
                       help="comma list or logspace:lo:hi:count")
        p.add_argument("--workers", help="worker processes for sweep points (default 1)")
    else:
        p.add_argument("--n-s", dest="n_s", help="number of sources")
        p.add_argument("--rho-t", dest="rho_t", help="target density, or a comma list for a ramp")
        p.add_argument("--strategy", help="random (default) or low-betweenness")
        p.add_argument("--log-bins", dest="log_bins", type=int, default=0,
                       help="also write log-binned spectra with this many bins per decade")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracemap", description="Traceroute-like exploration of graphs.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("generate", help="generate a graph and write its largest component")
    p.add_argument("spec", help="er:n=N,k=K | rsf:n=N,gamma=G | wei:n=N,a=A,c=C")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="edge-list output path")

    p = sub.add_parser("betweenness", help="vertex and edge betweenness tables")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--out", default=".", help="output directory")

    _experiment_args(sub.add_parser("explore", help="fixed-budget Monte Carlo exploration"), False)
    _experiment_args(sub.add_parser("symmetry-sweep", help="fixed-epsilon sweep over rho_T"), True)
    _experiment_args(sub.add_parser("compare-deployment",
                                    help="random vs low-betweenness deployment"), True)
    return parser


_CONFIG_KEYS = ("graph", "seed", "psc", "realizations", "out", "epsilon", "rho_t_grid",
                "workers", "n_s", "rho_t", "strategy")


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    raw = io.read_config(args.config) if args.config else {}
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = str(value)
    return ExperimentConfig.from_mapping(raw)


def _generate(args) -> None:
    g = io.generate_from_spec(io.parse_graph_spec(args.spec), args.seed)
    io.write_edge_list(g, args.out)
    print(f"wrote {args.out}: n={g.n} m={g.m} mean degree {2 * g.m / g.n:.3f}")


def _betweenness(args) -> None:
    g = io.read_edge_list(args.graph)
    t = brandes_betweenness(g)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_betweenness_csv(t, out / "betweenness_vertices.csv", out / "betweenness_edges.csv")
    res = sum_rule_residual(t)
    print(f"n={g.n} m={g.m}; sum rule max residual {abs(res).max():.3g}")


def _explore(args) -> None:
    config = config_from_args(args)
    for rep in explore(config, log_bins=args.log_bins):
        p, s = rep["point"], rep["summary"]
        print(f"rho_t={p['rho_t']:.4g} n_s={p['n_s']} eps={p['epsilon']:.4g}: "
              f"N*/N={s['vertex_fraction']:.4f} E*/E={s['edge_fraction']:.4f} "
              f"k*/k={s['degree_ratio']:.4f}")
        for note in rep["notes"]:
            print(f"  note: {note}")


def _sweep(args) -> None:
    rep = symmetry_sweep(config_from_args(args))
    ext = rep["extremum"]["edge_fraction"]
    where = "none inside the grid" if ext["kind"] is None else f"{ext['kind']} at rho_t={ext['rho_t']:.4g}"
    print(f"symmetry point sqrt(eps/N) = {rep['symmetry_point']:.4g}; E*/E extremum: {where}")
    for note in rep["notes"]:
        print(f"  note: {note}")


def _compare(args) -> None:
    rep = compare_deployment(config_from_args(args))
    wins = ", ".join(f"{k}={v}" for k, v in rep["low_betweenness_wins"].items())
    print(f"low-betweenness better at every point: {wins}")


_COMMANDS = {
    "generate": _generate,
    "betweenness": _betweenness,
    "explore": _explore,
    "symmetry-sweep": _sweep,
    "compare-deployment": _compare,
}


def main(argv: list[str] | None = None) -> int:
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        _COMMANDS[args.command](args)
    except (UsageError, ConfigError, io.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GenerationError, DisconnectedGraphError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"done in {time.perf_counter() - start:.1f} s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
