"""Batch command-line front end: backbone extraction, backbone comparison,
synthetic instance generation, percolation studies, and runtime benchmarks.

Exit codes: 0 all artifacts written, 1 parse/domain/runtime error,
2 usage error (bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import baselines, metrics, percolation, solver, synth
from .errors import DomainError, ParseError
from .graph import (
    backbone_from_edge_subset,
    parse_edge_list,
    serialize_edge_list,
)
from .objectives import ObjectiveSpec

OBJECTIVES = {
    "micro": ("microcanonical", None),
    "canonical-geometric": ("canonical", "geometric"),
    "canonical-poisson": ("canonical", "poisson"),
    "canonical-exponential": ("canonical", "exponential"),
}

METHODS = (
    "mdl-global",
    "mdl-local",
    "disparity-alpha",
    "disparity-tope",
    "hss",
    "percolation",
)


def _load_graph(path, directed, weight_kind="integer", round_weights=False):
    with open(path) as fh:
        return parse_edge_list(
            fh, directed=directed, weight_kind=weight_kind,
            round_weights=round_weights,
        )


def _objective_spec(name, scope, lam):
    family, model = OBJECTIVES[name]
    return ObjectiveSpec(scope, family, model, lam)


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _output_prefix(args, default_stem):
    if args.output:
        return Path(args.output)
    return Path(default_stem)


def cmd_backbone(args):
    weight_kind = (
        "real" if args.objective == "canonical-exponential" else "integer"
    )
    g = _load_graph(
        args.input, directed=not args.undirected,
        weight_kind=weight_kind, round_weights=args.round_weights,
    )
    if args.method == "mdl-global":
        spec = _objective_spec(args.objective, "global", args.lam)
        result = solver.greedy_global(g, spec)
    elif args.method == "mdl-local":
        spec = _objective_spec(args.objective, "local", args.lam)
        result = solver.greedy_local(g, spec)
    else:
        result = None
        if args.method == "disparity-alpha":
            bb = baselines.disparity_filter(g, alpha=args.alpha)
        elif args.method == "disparity-tope":
            if args.etarget is None:
                raise DomainError("disparity-tope requires --etarget")
            bb = baselines.disparity_filter_top_e(g, args.etarget)
        elif args.method == "hss":
            bb = baselines.high_salience_skeleton(g, seed=args.seed)
        else:
            bb = baselines.percolation_backbone(g)

    prefix = _output_prefix(args, Path(args.input).stem + "." + args.method)
    if result is not None:
        bb = result.backbone
        doc = solver.result_to_dict(result, include_trace=True)
    else:
        doc = {
            "method": args.method,
            "N": g.num_nodes,
            "E": g.num_edges,
            "W": g.total_weight,
            "E_b": bb.num_edges,
            "W_b": bb.total_weight,
            "edges": [
                [g.labels[int(g.src[e])], g.labels[int(g.dst[e])],
                 float(g.weights[e])]
                for e in np.nonzero(bb.member_flags)[0]
            ],
        }
        if args.method == "disparity-alpha":
            doc["alpha"] = args.alpha
        if args.method == "hss":
            doc["seed"] = args.seed
    doc["seed"] = doc.get("seed", args.seed)
    doc["input"] = str(args.input)
    doc["directed"] = not args.undirected

    if bb.num_edges:
        _write_text(str(prefix) + ".tsv", serialize_edge_list(bb.subgraph()))
    else:
        _write_text(str(prefix) + ".tsv", "")
    _write_json(str(prefix) + ".json", doc)
    return 0


def _backbone_from_file(g, path):
    bb_graph = _load_graph(
        path, directed=g.directed,
        weight_kind=g.weight_kind,
    )
    label_idx = {lab: i for i, lab in enumerate(g.labels)}
    pairs = []
    for i, j in zip(bb_graph.src, bb_graph.dst):
        a, b = bb_graph.labels[int(i)], bb_graph.labels[int(j)]
        if a not in label_idx or b not in label_idx:
            raise DomainError(f"backbone node {a!r} or {b!r} not in graph")
        pairs.append((label_idx[a], label_idx[b]))
    return backbone_from_edge_subset(g, pairs)


def cmd_compare(args):
    g = _load_graph(
        args.input, directed=not args.undirected,
        weight_kind="integer", round_weights=args.round_weights,
    )
    rows = []
    edge_sets = []
    for path in args.backbones:
        bb = _backbone_from_file(g, path)
        m = metrics.summarize(g, bb, seed=args.seed)
        rows.append({
            "backbone": str(path),
            "E_b": bb.num_edges,
            "W_b": bb.total_weight,
            "edge_fraction": m.edge_fraction,
            "weight_fraction": m.weight_fraction,
            "nonisolated_fraction": m.nonisolated_fraction,
            "hellinger": m.hellinger,
            "reachability": m.reachability,
        })
        edge_sets.append(bb.edge_set())
    doc = {"input": str(args.input), "seed": args.seed, "backbones": rows}
    if len(edge_sets) >= 2:
        doc["jaccard_matrix"] = [
            [metrics.jaccard_similarity(a, b) for b in edge_sets]
            for a in edge_sets
        ]
    prefix = _output_prefix(args, Path(args.input).stem + ".compare")
    _write_json(str(prefix) + ".json", doc)
    return 0


def cmd_synth(args):
    prefix = _output_prefix(args, f"synth-{args.kind}")
    if args.kind == "regular":
        g = synth.random_regular_directed(args.N, args.k, seed=args.seed)
        params = {"kind": "regular", "N": args.N, "k": args.k, "seed": args.seed}
        planted = None
    elif args.kind == "planted":
        base = synth.random_regular_directed(args.N, args.k, seed=args.seed)
        inst = synth.plant_weights_canonical(
            base, gamma=args.gamma, scope=args.scope, seed=args.seed
        )
        g, planted = inst.graph, inst.planted
        params = dict(inst.params, kind="planted", k=args.k)
    else:
        inst = synth.dirichlet_multinomial_weights(
            args.N, args.k, args.W, args.hstr, args.hneig, seed=args.seed
        )
        g, planted = inst.graph, None
        params = dict(inst.params, kind="dm")
    _write_text(str(prefix) + ".tsv", serialize_edge_list(g))
    _write_json(str(prefix) + ".params.json", params)
    if planted is not None and planted.num_edges:
        _write_text(
            str(prefix) + ".planted.tsv", serialize_edge_list(planted.subgraph())
        )
    return 0


def _parse_pgrid(text):
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("log", "lin"):
        raise DomainError(f"bad p-grid spec {text!r}; use log:a:b:n or lin:a:b:n")
    try:
        a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise DomainError(f"bad p-grid spec {text!r}") from None
    if n < 1 or not 0 <= a <= b <= 1 or (parts[0] == "log" and a <= 0):
        raise DomainError(f"bad p-grid range in {text!r}")
    if parts[0] == "log":
        return np.logspace(np.log10(a), np.log10(b), n)
    return np.linspace(a, b, n)


def cmd_percolation(args):
    g = _load_graph(
        args.input, directed=False,
        weight_kind="integer", round_weights=args.round_weights,
    )
    backbone_graphs = [
        _backbone_from_file(g, p).subgraph() for p in args.backbones
    ]
    grid = _parse_pgrid(args.pgrid)
    reports = percolation.backbone_percolation_study(
        g, backbone_graphs, grid, seed=args.seed, warm_start=not args.no_warm_start
    )
    doc = {
        "input": str(args.input),
        "seed": args.seed,
        "p_grid": [float(p) for p in reports[0].p_grid],
        "graphs": [
            {
                "label": r.label,
                "S": [float(s) for s in r.S],
                "p_crit": r.p_crit,
                "iterations": list(r.iterations),
                "eig_seconds": r.eig_seconds,
                "mean_abs_error": r.mean_abs_error,
                "p_crit_error": r.p_crit_error,
                "runtime_ratio": r.runtime_ratio,
            }
            for r in reports
        ],
    }
    prefix = _output_prefix(args, Path(args.input).stem + ".percolation")
    _write_json(str(prefix) + ".json", doc)
    return 0


def cmd_bench(args):
    sizes = [int(float(s)) for s in args.sizes.split(",")]
    spec_g = _objective_spec(args.objective, "global", args.lam)
    spec_l = _objective_spec(args.objective, "local", args.lam)
    rows = []
    for n in sizes:
        inst = synth.dirichlet_multinomial_weights(
            n, args.k, n * args.k * args.wfactor, args.hstr, args.hneig,
            seed=args.seed,
        )
        g = inst.graph
        t0 = time.perf_counter()
        solver.greedy_global(g, spec_g)
        t_global = time.perf_counter() - t0
        t0 = time.perf_counter()
        solver.greedy_local(g, spec_l)
        t_local = time.perf_counter() - t0
        rows.append({
            "N": n, "E": g.num_edges, "W": g.total_weight,
            "seconds_global": t_global, "seconds_local": t_local,
        })
    doc = {"objective": args.objective, "k": args.k, "seed": args.seed,
           "runs": rows}
    if len(rows) >= 2:
        logn = np.log([r["N"] for r in rows])
        for key in ("seconds_global", "seconds_local"):
            slope = np.polyfit(logn, np.log([r[key] for r in rows]), 1)[0]
            doc["slope_" + key.split("_")[1]] = float(slope)
    prefix = _output_prefix(args, "bench")
    _write_json(str(prefix) + ".json", doc)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mdlbackbone",
        description="Parameter-free MDL network backbones and baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", default=None, help="output path prefix")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="worker bound for library parallelism")

    p = sub.add_parser("backbone", help="extract a backbone from an edge list")
    p.add_argument("input")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--objective", choices=sorted(OBJECTIVES), default="micro")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--etarget", type=int, default=None)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--round-weights", action="store_true")
    common(p)
    p.set_defaults(func=cmd_backbone)

    p = sub.add_parser("compare", help="score backbones against their graph")
    p.add_argument("input")
    p.add_argument("--backbones", nargs="+", required=True)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--round-weights", action="store_true")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="generate synthetic instances")
    kinds = p.add_subparsers(dest="kind", required=True)
    for kind in ("regular", "planted", "dm"):
        kp = kinds.add_parser(kind)
        kp.add_argument("--N", type=int, required=True)
        kp.add_argument("--k", type=int, required=True)
        if kind == "planted":
            kp.add_argument("--gamma", type=float, required=True)
            kp.add_argument("--scope", choices=("global", "local"),
                            default="global")
        if kind == "dm":
            kp.add_argument("--W", type=int, required=True)
            kp.add_argument("--hstr", type=float, required=True)
            kp.add_argument("--hneig", type=float, required=True)
        common(kp)
        kp.set_defaults(func=cmd_synth)

    p = sub.add_parser("percolation", help="message-passing percolation study")
    p.add_argument("input")
    p.add_argument("--pgrid", default="log:1e-4:1:25",
                   help="log:a:b:n or lin:a:b:n")
    p.add_argument("--backbones", nargs="*", default=[])
    p.add_argument("--no-warm-start", action="store_true")
    p.add_argument("--round-weights", action="store_true")
    common(p)
    p.set_defaults(func=cmd_percolation)

    p = sub.add_parser("bench", help="runtime scaling benchmark")
    p.add_argument("--sizes", default="1e3,1e4,1e5")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--wfactor", type=int, default=10,
                   help="total weight as a multiple of N*k")
    p.add_argument("--hstr", type=float, default=0.1)
    p.add_argument("--hneig", type=float, default=0.1)
    p.add_argument("--objective", choices=sorted(OBJECTIVES), default="micro")
    p.add_argument("--lam", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError, OSError) as exc:
        print(f"mdlbackbone: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
