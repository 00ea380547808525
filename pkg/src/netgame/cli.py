"""Command-line front end.

Exit codes: 0 success, 1 rejected profile or no result, 2 usage or input
error, 3 enumeration cap or work budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    aggregate_bounds,
    delta1_results,
    eta,
    max_welfare_bounds,
    tree_bounds,
    tree_welfare_bounds,
    welfare_profile_bounds,
)
from .game import (
    GameConfig,
    construct_ice,
    enumerate_equilibria,
    make_benefit,
    max_aggregate_play,
    nash_report,
    welfare,
)
from .graph import (
    CapExceededError,
    Graph,
    GraphFormatError,
    check_cap,
    clique_number,
    independence_number,
    read_graph,
    tree_structure,
    unique_max_independent_set,
)
from .lcp import DEFAULT_TOL, build_lcp, enumerate_solutions

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
WORK_BUDGET = 1 << 24  # grid points times supports per point


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# serialization


def _plain(obj):
    """Numpy scalars and arrays to builtins; non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def to_json(report) -> str:
    # float repr is the shortest string that parses back to the same double
    return json.dumps(_plain(report), indent=2, allow_nan=False)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    cols = list(rows[0])
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in _plain(row).items()})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return "" if v is None else v


def _flat_rows(report: dict) -> list[dict]:
    return [{"key": k, "value": json.dumps(v) if isinstance(v, (dict, list)) else v}
            for k, v in _plain(report).items()]


# --------------------------------------------------------------------------
# request plumbing


def _cfg(args) -> GameConfig:
    if args.delta is None:
        raise UsageError("--delta is required")
    try:
        return GameConfig(args.delta, args.e_star, args.cost, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _graph(args) -> tuple[Graph, list[float] | None]:
    if not args.graph:
        raise UsageError("--graph is required")
    return read_graph(args.graph)


def _benefit(args, cfg: GameConfig, n: int):
    if args.sigma_b is None:
        return None
    try:
        return make_benefit(cfg, n, args.sigma_b, args.b0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read_profile(path: str) -> np.ndarray:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.replace(",", " ").split()
    if isinstance(data, dict):
        data = data.get("x", data.get("profile"))
    try:
        return np.array([float(v) for v in data], dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot read profile from {path}: {exc}") from exc


def _parse_nodes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad node list {text!r}") from exc


# --------------------------------------------------------------------------
# commands; each returns (exit code, report, csv rows or None)


def cmd_info(args):
    g, weights = _graph(args)
    alpha, witness = independence_number(g)
    report = {
        "n": g.n,
        "m": g.m,
        "edges": [list(e) for e in g.sorted_edges()],
        "degrees": list(g.degrees),
        "alpha": alpha,
        "mis_witness": list(witness),
        "unique_mis": unique_max_independent_set(g) is not None,
        "omega": clique_number(g),
        "eta": eta(g),
        "tree": tree_structure(g).to_dict(),
    }
    if weights is not None:
        report["weights"] = weights
    return EXIT_OK, report, None


def cmd_enumerate(args):
    g, _ = _graph(args)
    cfg = _cfg(args)
    sols, stats = enumerate_solutions(build_lcp(g, cfg.delta), cfg.tol, args.cap,
                                      return_stats=True)
    eqs = [{"support": list(s.support), "x": (cfg.e_star * s.x).tolist(),
            "total": cfg.e_star * s.l1} for s in sols]
    report = {"cfg": cfg.to_dict(), "equilibria": eqs,
              "stats": {"supports": stats.supports, "prefiltered": stats.prefiltered,
                        "singular": stats.singular}}
    rows = [{"support": e["support"], "total": e["total"], "x": e["x"]} for e in eqs]
    return EXIT_OK, report, rows


def cmd_max_play(args):
    g, _ = _graph(args)
    cfg = _cfg(args)
    res = max_aggregate_play(g, cfg, args.cap)
    report = {"cfg": cfg.to_dict(), **res.to_dict()}
    return (EXIT_OK if res.argmax else EXIT_REJECT), report, None


def cmd_bounds(args):
    g, weights = _graph(args)
    cfg = _cfg(args)
    spec = _benefit(args, cfg, g.n)
    reports = {}
    if cfg.delta < 1.0:
        reports["aggregate"] = aggregate_bounds(g, cfg.delta, cfg.e_star).to_dict()
    ts = tree_structure(g)
    if ts.kind != "not_a_tree":
        reports["tree"] = tree_bounds(g, cfg.e_star, cfg.delta).to_dict()
    if spec is not None:
        reports["max_welfare"] = max_welfare_bounds(g, cfg, spec, args.cap).to_dict()
        if ts.centers:
            reports["tree_welfare"] = tree_welfare_bounds(g, cfg, spec).to_dict()
    if cfg.delta == 1.0:
        if spec is not None and min(g.degrees, default=0) == 0:
            spec = None
        reports["perfect_substitutes"] = delta1_results(g, cfg, spec, weights)
    return EXIT_OK, {"cfg": cfg.to_dict(), "eta": eta(g), "reports": reports}, None


def cmd_welfare(args):
    g, _ = _graph(args)
    cfg = _cfg(args)
    spec = _benefit(args, cfg, g.n)
    if spec is None:
        raise UsageError("--sigma-b is required for welfare")
    rows = []
    for x in enumerate_equilibria(g, cfg, args.cap):
        rep = welfare_profile_bounds(g, cfg, spec, x)
        rows.append({"x": x.tolist(), "total": float(x.sum()),
                     "welfare": welfare(g, cfg, spec, x),
                     "lower": rep.lower, "upper": rep.upper, "applicable": rep.applicable})
    report = {
        "cfg": cfg.to_dict(),
        "benefit": {"b0": spec.b0, "lam": spec.lam, "sigma_b": args.sigma_b},
        "equilibria": rows,
        "max_welfare": max(r["welfare"] for r in rows) if rows else None,
        "max_welfare_bounds": max_welfare_bounds(g, cfg, spec, args.cap).to_dict(),
    }
    return EXIT_OK, report, rows


@dataclass
class SweepRow:
    support: tuple[int, ...]
    intervals: list[list[float]] = field(default_factory=list)
    totals: list[list[float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"support": list(self.support), "intervals": self.intervals,
                "totals": self.totals}


def sweep(g: Graph, delta_min: float, delta_max: float, steps: int, e_star: float = 1.0,
          tol: float = DEFAULT_TOL, cap: int | None = None) -> list[SweepRow]:
    """Group equilibria on a uniform delta grid by support and report where each one holds."""
    if not (0.0 < delta_min < delta_max <= 1.0):
        raise UsageError("need 0 < delta-min < delta-max <= 1")
    if steps < 2:
        raise UsageError("steps must be at least 2")
    check_cap(g.n, cap)
    if steps * 2 ** g.n > WORK_BUDGET:
        raise CapExceededError(f"sweep work {steps} x 2^{g.n} exceeds budget {WORK_BUDGET}")
    grid = np.linspace(delta_min, delta_max, steps)
    seen: dict[tuple, list[tuple[int, float]]] = {}
    for k, d in enumerate(grid):
        for sol in enumerate_solutions(build_lcp(g, float(d)), tol, cap):
            seen.setdefault(sol.support, []).append((k, e_star * sol.l1))
    rows = []
    for support, hits in seen.items():
        row = SweepRow(support)
        run = [hits[0]]
        for hit in hits[1:] + [None]:
            if hit is not None and hit[0] == run[-1][0] + 1:
                run.append(hit)
                continue
            row.intervals.append([float(grid[run[0][0]]), float(grid[run[-1][0]])])
            row.totals.append([run[0][1], run[-1][1]])
            if hit is not None:
                run = [hit]
        rows.append(row)
    rows.sort(key=lambda r: (r.intervals[0][0], r.support))
    return rows


def cmd_sweep(args):
    g, _ = _graph(args)
    rows = sweep(g, args.delta_min, args.delta_max, args.steps, args.e_star, args.tol, args.cap)
    report = {"delta_min": args.delta_min, "delta_max": args.delta_max, "steps": args.steps,
              "grid_step": (args.delta_max - args.delta_min) / (args.steps - 1),
              "patterns": [r.to_dict() for r in rows]}
    csv_rows = [{"support": r.support, "delta_lo": iv[0], "delta_hi": iv[1],
                 "total_lo": t[0], "total_hi": t[1]}
                for r in rows for iv, t in zip(r.intervals, r.totals)]
    return EXIT_OK, report, csv_rows


def cmd_verify(args):
    g, _ = _graph(args)
    cfg = _cfg(args)
    if not args.profile:
        raise UsageError("--profile is required for verify")
    x = _read_profile(args.profile)
    if len(x) != g.n:
        raise UsageError(f"profile has {len(x)} entries, graph has {g.n} nodes")
    ver = nash_report(g, cfg, x)
    report = {"cfg": cfg.to_dict(), "x": x.tolist(), "nash": ver.ok,
              "detail": ver.describe(), **ver.to_dict()}
    return (EXIT_OK if ver.ok else EXIT_REJECT), report, None


def cmd_ice(args):
    g, _ = _graph(args)
    cfg = _cfg(args)
    if args.mis is None:
        _, mis = independence_number(g)
    else:
        mis = _parse_nodes(args.mis)
    try:
        x = construct_ice(g, cfg, mis)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = {"cfg": cfg.to_dict(), "mis": list(mis),
              "x": None if x is None else x.tolist(),
              "total": None if x is None else float(x.sum())}
    return (EXIT_OK if x is not None else EXIT_REJECT), report, None


COMMANDS = {
    "info": cmd_info,
    "enumerate": cmd_enumerate,
    "max-play": cmd_max_play,
    "bounds": cmd_bounds,
    "welfare": cmd_welfare,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "ice": cmd_ice,
}


COMMAND_HELP = {
    "info": "graph summary: alpha, omega, eta, tree structure",
    "enumerate": "all equilibria at --delta",
    "max-play": "largest total effort and its maximizers",
    "bounds": "aggregate, tree and welfare bounds with theorem tags",
    "welfare": "welfare of every equilibrium with its bracket (needs --sigma-b)",
    "sweep": "equilibrium supports over a delta grid",
    "verify": "check a --profile against the equilibrium conditions",
    "ice": "independent clique equilibrium built from --mis",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="edge list ('n m' header) or JSON graph file")
    common.add_argument("--delta", type=float)
    common.add_argument("--e-star", type=float, default=1.0)
    common.add_argument("--cost", type=float, default=1.0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--sigma-b", type=float, help="benefit concavity in (0, 1)")
    common.add_argument("--b0", type=float, help="benefit at e* (default c * e*)")
    common.add_argument("--delta-min", type=float, default=0.05)
    common.add_argument("--delta-max", type=float, default=1.0)
    common.add_argument("--steps", type=int, default=20)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cap", type=int, help="node cap for exhaustive search "
                        "(default NETGAME_CAP or 20)")
    common.add_argument("--profile", help="effort profile file for verify")
    common.add_argument("--mis", help="comma separated independent set for ice")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="netgame", description="Nash equilibria of public-goods games on networks.",
        epilog=" ".join(__doc__.split("\n\n")[1].split()))
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMAND_HELP[name])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code, report, rows = COMMANDS[args.command](args)
    except (UsageError, GraphFormatError, OSError) as exc:
        print(f"netgame: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"netgame: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.format == "csv":
        sys.stdout.write(to_csv(rows if rows is not None else _flat_rows(report)))
    else:
        sys.stdout.write(to_json(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
