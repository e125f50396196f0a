"""Command-line interface.

Every subcommand reads a graph (edge list or JSON), writes its results into
``--output-dir`` (default: ``$RICCICORE_OUTPUT_DIR`` or the working
directory) and prints a short summary.  Values may also come from a JSON or
TOML file given with ``--config``: top-level keys apply to every subcommand,
a table named after the subcommand overrides them, and explicit flags win
over both.  Keys use the flag names (``step-size`` or ``step_size``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .augmentation import augment_to_strong
from .baselines import METHODS, baseline_core, centrality
from .core import TIE_POLICIES, ExtractionConfig, run_pipeline
from .curvature import curvature_arrays
from .experiments import (
    DEFAULT_ALPHAS,
    DEFAULT_RATIOS,
    ROBUSTNESS_MODES,
    ExperimentConfig,
    alpha_sweep,
    compare_methods,
    robustness_deletion,
)
from .flow import RHO_MODES, FlowConfig, run_flow
from .graph import (
    GraphError,
    graph_stats,
    graph_to_dict,
    is_strongly_connected,
    is_weakly_connected,
    largest_weakly_connected_component,
    parse_edge_list,
    read_graph,
)
from .metrics import PAIR_MODES, evaluate_core
from .report import write_csv, write_json, write_rows
from .transport import TransportError

ENV_OUTPUT_DIR = "RICCICORE_OUTPUT_DIR"
GLOBAL_DEFAULTS = {"config": None, "output_dir": None, "seed": 0, "threads": 1,
                   "log_level": "WARNING"}

log = logging.getLogger("riccicore")


class UsageError(Exception):
    pass


# -- parser -----------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS if suppress else None
    g = p.add_argument_group("global options")
    g.add_argument("--config", default=d, help="JSON or TOML file with option values")
    g.add_argument("--output-dir", default=d,
                   help=f"directory for output files (default: ${ENV_OUTPUT_DIR} or .)")
    g.add_argument("--seed", type=int, default=d, help="random seed (default 0)")
    g.add_argument("--threads", type=int, default=d, help="parallel worker processes (default 1)")
    g.add_argument("--log-level", default=d, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return p


def _input(p, name="--input"):
    p.add_argument(name, help="edge list ('src dst [weight]' lines) or graph JSON")
    p.add_argument("--ignore-weights", action="store_true",
                   help="treat every edge of an edge list as weight 1")


def _flow(p):
    p.add_argument("--alpha", type=float, default=0.1, help="laziness in [0, 1] (default 0.1)")
    p.add_argument("--step-size", type=float, default=0.1, help="flow step s in (0, 1)")
    p.add_argument("--iterations", type=int, default=5, help="flow iterations N (default 5)")
    p.add_argument("--rho", choices=RHO_MODES, default="distance",
                   help="edge length multiplying the curvature (default: distance)")
    p.add_argument("--no-bound-check", dest="bound_check", action="store_false",
                   help="skip the per-step weight bound assertions")


def _extraction(p):
    _flow(p)
    p.add_argument("--tau", type=float, default=0.8, help="share of real edges cut (default 0.8)")
    p.add_argument("--cut-count", type=int, default=None,
                   help="cut exactly this many heaviest real edges (overrides --tau)")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="keep-all-maximal")
    p.add_argument("--artificial-weight", type=float, default=None,
                   help="weight A of added edges (default 100 * max(1, max weight))")
    p.add_argument("--pair-mode", choices=PAIR_MODES, default="ordered",
                   help="node pairs used by the distance stretch")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="riccicore", parents=[_global_flags(suppress=True)],
        description="Ricci curvature flow and core subgraphs of directed graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("stats", parents=[common], help="graph statistics (raw and largest weak component)")
    _input(p)

    p = sub.add_parser("augment", parents=[common], help="add artificial edges for strong connectivity")
    _input(p)
    p.add_argument("--artificial-weight", type=float, default=None)
    p.add_argument("--largest-component", action="store_true",
                   help="restrict to the largest weak component first")
    p.add_argument("--output", default=None, help="augmented graph JSON (default: augmented.json)")

    p = sub.add_parser("curvature", parents=[common], help="Ricci curvature of every edge")
    _input(p)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--augment", action="store_true",
                   help="take the largest weak component and augment it first")
    p.add_argument("--artificial-weight", type=float, default=None)
    p.add_argument("--output", default=None, help="CSV path (default: curvature.csv)")

    p = sub.add_parser("flow", parents=[common], help="run the discrete Ricci flow")
    _input(p)
    _flow(p)
    p.add_argument("--augment", action="store_true",
                   help="take the largest weak component and augment it first")
    p.add_argument("--artificial-weight", type=float, default=None)
    p.add_argument("--trace-output", default=None, help="trace JSON (default: flow_trace.json)")

    p = sub.add_parser("extract-core", parents=[common], help="full core extraction pipeline")
    _input(p)
    _extraction(p)

    p = sub.add_parser("metrics", parents=[common], help="score a given core")
    _input(p, "--graph")
    p.add_argument("--core-nodes", help="file with one node label per line")
    p.add_argument("--core-edges", default=None,
                   help="file with 'src dst' lines (default: edges induced by the core nodes)")
    p.add_argument("--pair-mode", choices=PAIR_MODES, default="ordered")

    p = sub.add_parser("baseline", parents=[common], help="centrality baseline core")
    _input(p)
    p.add_argument("--method", choices=METHODS, default="pagerank")
    p.add_argument("--k", type=int, default=None, help="number of top-ranked nodes")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="keep-all-maximal")
    p.add_argument("--pair-mode", choices=PAIR_MODES, default="ordered")

    p = sub.add_parser("alpha-sweep", parents=[common], help="pipeline metrics across alpha")
    _input(p)
    _extraction(p)
    p.add_argument("--alphas", type=float, nargs="+", default=list(DEFAULT_ALPHAS))
    p.add_argument("--no-plot", dest="plot", action="store_false")

    p = sub.add_parser("compare", parents=[common], help="Ricci core against the centrality baselines")
    _input(p)
    _extraction(p)
    p.add_argument("--methods", nargs="+", choices=METHODS, default=list(METHODS))
    p.add_argument("--no-plot", dest="plot", action="store_false")

    p = sub.add_parser("robustness", parents=[common], help="metrics under random core-edge deletion")
    _input(p)
    _extraction(p)
    p.add_argument("--methods", nargs="+", choices=METHODS, default=list(METHODS))
    p.add_argument("--ratios", type=float, nargs="+", default=list(DEFAULT_RATIOS))
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--mode", choices=ROBUSTNESS_MODES, default="fixed-core")
    p.add_argument("--no-plot", dest="plot", action="store_false")
    return parser


# -- configuration ----------------------------------------------------------


def load_config_file(path: str) -> dict:
    text = Path(path).read_text()
    if path.lower().endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def _norm(d: dict) -> dict:
    return {k.replace("-", "_"): v for k, v in d.items()}


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        if isinstance(action, argparse._SubParsersAction):  # noqa: SLF001
            return action.choices[command]
    raise KeyError(command)


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    if config_path:
        raw = load_config_file(config_path)
        values = _norm({k: v for k, v in raw.items() if not isinstance(v, dict)})
        section = raw.get(args.command, raw.get(args.command.replace("-", "_"), {}))
        values.update(_norm(section))
        sp = _subparser(parser, args.command)
        known = {a.dest for a in sp._actions} | set(GLOBAL_DEFAULTS)  # noqa: SLF001
        unknown = sorted(set(values) - known)
        if unknown:
            raise UsageError(f"unknown key(s) in {config_path}: {', '.join(unknown)}")
        sp.set_defaults(**values)
        args = parser.parse_args(argv)
        for k in GLOBAL_DEFAULTS:
            if not hasattr(args, k) and k in values:
                setattr(args, k, values[k])
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.output_dir is None:
        args.output_dir = os.environ.get(ENV_OUTPUT_DIR, ".")
    return args


def resolved_config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items())}


# -- helpers ----------------------------------------------------------------


def _input_path(args, attr="input") -> Path:
    path = getattr(args, attr)
    if not path:
        raise UsageError(f"--{attr.replace('_', '-')} is required")
    if not Path(path).exists():
        raise FileNotFoundError(f"input file not found: {path}")
    return Path(path)


def _load(args, attr="input"):
    return read_graph(_input_path(args, attr), ignore_weights=args.ignore_weights)


def _flow_config(args) -> FlowConfig:
    return FlowConfig(alpha=args.alpha, step_size=args.step_size, iterations=args.iterations,
                      bound_check=args.bound_check, rho=args.rho)


def _extraction_config(args) -> ExtractionConfig:
    return ExtractionConfig(tau=args.tau, tie_policy=args.tie_policy,
                            artificial_weight=args.artificial_weight,
                            flow=_flow_config(args), cut_count=args.cut_count)


def _experiment_config(args, **extra) -> ExperimentConfig:
    return ExperimentConfig(extraction=_extraction_config(args), seed=args.seed,
                            pair_mode=args.pair_mode, threads=args.threads, **extra)


def _out(args, name: str) -> Path:
    return Path(args.output_dir) / name


def _read_lines(path: str) -> list[list[str]]:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith(("#", "%")):
            rows.append(line.replace(",", " ").split())
    return rows


def _metrics_payload(rep) -> dict:
    return rep.as_dict()


# -- subcommands ------------------------------------------------------------


def cmd_stats(args, cfg) -> None:
    path = _input_path(args)
    if path.suffix.lower() == ".json":
        g, dups, loops = read_graph(path), 0, 0
    else:
        parsed = parse_edge_list(path.read_text(), args.ignore_weights)
        g, dups, loops = parsed.graph, parsed.duplicates, parsed.self_loops
    h = largest_weakly_connected_component(g)
    payload = {
        "raw": graph_stats(g).as_dict(),
        "largest_weak_component": graph_stats(h).as_dict(),
        "duplicates_dropped": dups,
        "self_loops_dropped": loops,
        "weakly_connected": is_weakly_connected(g),
        "strongly_connected": is_strongly_connected(g),
    }
    write_json(_out(args, "stats.json"), payload, cfg)
    s = payload["largest_weak_component"]
    print(f"vertices={s['vertices']} edges={s['edges']} avg_degree={s['avg_degree']:.2f} "
          f"diameter={s['diameter']} density={s['density']:.3f}")


def cmd_augment(args, cfg) -> None:
    g = _load(args)
    if args.largest_component:
        g = largest_weakly_connected_component(g)
    res = augment_to_strong(g, args.artificial_weight)
    out = Path(args.output) if args.output else _out(args, "augmented.json")
    write_json(out, {"artificial_weight": res.artificial_weight,
                     "added_edges": [[g.labels[u], g.labels[v]] for u, v in res.added_edges],
                     "graph": graph_to_dict(res.graph)}, cfg)
    print(f"added {len(res.added_edges)} artificial edge(s) of weight {res.artificial_weight:g}")


def _prepare_strong(args):
    g = _load(args)
    if args.augment:
        g = augment_to_strong(largest_weakly_connected_component(g), args.artificial_weight).graph
    if not is_strongly_connected(g):
        raise GraphError("graph is not strongly connected; run 'augment' first or pass --augment")
    return g


def cmd_curvature(args, cfg) -> None:
    g = _prepare_strong(args)
    curv = curvature_arrays(g, args.alpha)
    rows = [(g.labels[u], g.labels[v], w, r, ws, k) for (u, v), w, r, ws, k in
            zip(g.edges, g.weights.tolist(), curv.rho.tolist(), curv.wasserstein.tolist(),
                curv.kappa.tolist())]
    out = Path(args.output) if args.output else _out(args, "curvature.csv")
    write_csv(out, ["src", "dst", "weight", "rho", "wasserstein", "kappa"], rows, cfg)
    print(f"wrote curvature of {g.m} edges to {out}")


def cmd_flow(args, cfg) -> None:
    g = _prepare_strong(args)
    trace = run_flow(g, _flow_config(args))
    out = Path(args.trace_output) if args.trace_output else _out(args, "flow_trace.json")
    write_json(out, trace.to_dict(g), cfg)
    rows = [(g.labels[u], g.labels[v], a, w0, w1) for (u, v), a, w0, w1 in
            zip(g.edges, g.artificial.tolist(), g.weights.tolist(), trace.final_weights.tolist())]
    write_csv(_out(args, "flow_weights.csv"),
              ["src", "dst", "artificial", "initial_weight", "final_weight"], rows, cfg)
    print(f"ran {args.iterations} flow step(s) on {g.m} edges; trace in {out}")


def cmd_extract_core(args, cfg) -> None:
    g = _load(args)
    res = run_pipeline(g, _extraction_config(args))
    h, core = res.graph, res.core
    rep = evaluate_core(h, core, args.pair_mode) if core.n_nodes else None
    lab = h.labels
    core_set = set(core.core_nodes)
    core_edge_set = set(core.core_edges)
    retained = set(core.retained_edges)
    payload = {
        "core": core.to_dict(h),
        "metrics": _metrics_payload(rep) if rep else None,
        "graph": {"vertices": h.n, "edges": h.m},
        "artificial_edges": [[lab[u], lab[v]] for u, v in res.augmentation.added_edges],
        "artificial_weight": res.augmentation.artificial_weight,
    }
    write_json(_out(args, "core.json"), payload, cfg)
    write_json(_out(args, "metrics.json"), _metrics_payload(rep) if rep else {"metrics": None}, cfg)
    write_csv(_out(args, "core_nodes.csv"), ["label"], ([lab[v]] for v in core.core_nodes), cfg)
    write_csv(_out(args, "core_edges.csv"), ["src", "dst"],
              ([lab[u], lab[v]] for u, v in core.core_edges), cfg)
    write_csv(_out(args, "nodes.csv"), ["node", "label", "is_core"],
              ([v, lab[v], v in core_set] for v in range(h.n)), cfg)
    write_csv(_out(args, "edges.csv"), ["src", "dst", "final_weight", "retained", "is_core"],
              ([lab[u], lab[v], w, (u, v) in retained, (u, v) in core_edge_set]
               for (u, v), w in zip(h.edges, res.final_weights.tolist())), cfg)
    msg = f"core: {core.n_nodes} nodes, {core.n_edges} edges"
    if rep:
        rs = "undefined" if rep.r_s is None else f"{rep.r_s:.4f}"
        msg += f"; r_d_in={rep.r_d_in:.4f} r_d_out={rep.r_d_out:.4f} r_s={rs}"
    if core.degenerate:
        msg += " (degenerate: no nontrivial strongly connected component)"
    print(msg)


def cmd_metrics(args, cfg) -> None:
    g = _load(args, "graph")
    if not args.core_nodes:
        raise UsageError("--core-nodes is required")
    nodes = [g.node(row[0]) for row in _read_lines(args.core_nodes) if row[0] != "label"]
    if args.core_edges:
        edges = [(g.node(r[0]), g.node(r[1])) for r in _read_lines(args.core_edges)
                 if r[:2] != ["src", "dst"]]
    else:
        mask = g.induced_edge_mask(nodes)
        edges = [e for e, keep in zip(g.edges, mask.tolist()) if keep]
    rep = evaluate_core(g, (nodes, edges), args.pair_mode)
    write_json(_out(args, "metrics.json"), _metrics_payload(rep), cfg)
    print(json.dumps(rep.as_dict()))


def cmd_baseline(args, cfg) -> None:
    g = largest_weakly_connected_component(_load(args))
    scores = centrality(g, args.method)
    k = args.k if args.k is not None else g.n
    core = baseline_core(g, args.method, k, args.tie_policy, scores)
    rep = evaluate_core(g, core, args.pair_mode)
    write_csv(_out(args, f"scores_{args.method}.csv"), ["node", "label", "score"],
              ([v, g.labels[v], s] for v, s in enumerate(scores.scores.tolist())), cfg)
    write_json(_out(args, f"baseline_{args.method}.json"),
               {"method": args.method, "k": k, "core": core.to_dict(g),
                "metrics": _metrics_payload(rep)}, cfg)
    print(f"{args.method}: core {core.n_nodes} nodes, {core.n_edges} edges")


def cmd_alpha_sweep(args, cfg) -> None:
    g = _load(args)
    rows = alpha_sweep(g, _experiment_config(args, alphas=tuple(args.alphas)))
    write_rows(_out(args, "alpha_sweep.csv"), rows, cfg)
    if args.plot:
        from .plotting import plot_alpha_sweep
        plot_alpha_sweep(rows, _out(args, "alpha_sweep.png"), title=Path(args.input).stem)
    for r in rows:
        print(f"alpha={r.alpha:.2f} nodes={r.core_nodes} r_d_in={r.r_d_in:.4f} "
              f"r_d_out={r.r_d_out:.4f} r_s={'NA' if r.r_s is None else format(r.r_s, '.4f')}")


def cmd_compare(args, cfg) -> None:
    g = _load(args)
    comp = compare_methods(g, _experiment_config(args, methods=tuple(args.methods)))
    write_rows(_out(args, "comparison.csv"), comp.rows, cfg)
    write_json(_out(args, "comparison.json"),
               {"k": comp.k, "rows": comp.rows,
                "cores": {m: c.to_dict(comp.graph) for m, c in comp.cores.items()}}, cfg)
    if args.plot:
        from .plotting import plot_comparison
        plot_comparison(comp.rows, _out(args, "comparison.png"), title=Path(args.input).stem)
    for r in comp.rows:
        print(f"{r.method:12s} nodes={r.core_nodes} edges={r.core_edges} r_d_in={r.r_d_in:.4f} "
              f"r_d_out={r.r_d_out:.4f} r_s={'NA' if r.r_s is None else format(r.r_s, '.4f')}")


def cmd_robustness(args, cfg) -> None:
    g = _load(args)
    config = _experiment_config(args, methods=tuple(args.methods),
                                deletion_ratios=tuple(args.ratios), trials=args.trials,
                                robustness_mode=args.mode)
    rows = robustness_deletion(g, config)
    write_rows(_out(args, "robustness.csv"), rows, cfg)
    if args.plot:
        from .plotting import plot_robustness
        plot_robustness(rows, _out(args, "robustness.png"), title=Path(args.input).stem)
    print(f"wrote {len(rows)} rows to {_out(args, 'robustness.csv')}")


COMMANDS = {
    "stats": cmd_stats,
    "augment": cmd_augment,
    "curvature": cmd_curvature,
    "flow": cmd_flow,
    "extract-core": cmd_extract_core,
    "metrics": cmd_metrics,
    "baseline": cmd_baseline,
    "alpha-sweep": cmd_alpha_sweep,
    "compare": cmd_compare,
    "robustness": cmd_robustness,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse: --help/--version exit 0, usage errors exit 2
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"riccicore: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"riccicore: error: cannot read config: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args, resolved_config(args))
    except UsageError as exc:
        print(f"riccicore: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, GraphError, TransportError, ValueError, KeyError, RuntimeError) as exc:
        print(f"riccicore: error: {exc}", file=sys.stderr)
        return 1
    return 0


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
