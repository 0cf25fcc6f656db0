"""Command-line workflows over shards, summaries, distances, and samples.

Exit codes: 0 success, 1 I/O failure, 2 validation or data failure,
64 usage error. Every randomized command takes --seed (default 0) and
echoes it into its output artifacts: JSON outputs carry a "seed" key,
shard manifests carry it in "extra", and CSV-only commands write a
sidecar <output>.meta.json. Identical inputs, flags, and seed give
byte-identical outputs; nothing here writes timestamps.

An optional --config JSON file may hold default values for any optional
flag of the invoked subcommand (same key names as the flag dests);
values given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import frechet, sampling, select, spectral, stats, synthetic
from .errors import ChemalignError
from .shardio import read_manifest, read_shard, write_shard

EX_OK = 0
EX_IO = 1
EX_DATA = 2
EX_USAGE = 64

_NODE_POLICIES = {"all": "all-nodes", "one-per-graph": "one-node-per-graph"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 64."""

    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _write_meta(output: Path, command: str, seed: int, extra: dict | None = None) -> None:
    doc = {"command": command, "seed": seed}
    if extra:
        doc.update(extra)
    Path(str(output) + ".meta.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _cmd_summarize(args) -> int:
    shard = read_shard(args.shard)
    policy = _NODE_POLICIES[args.nodes]
    summary = stats.summarize_shard(
        shard, node_policy=policy, seed=args.seed, name=args.name, ddof=args.ddof
    )
    output = Path(args.output) if args.output else Path(args.shard).with_suffix(".csm1")
    stats.write_summary(summary, output, extra={"node_policy": policy, "seed": args.seed})
    print(
        f"{summary.name}: rows={summary.count} dim={summary.dim} "
        f"trace={float(summary.cov.trace()):.6g} -> {output}"
    )
    return EX_OK


def _cmd_distance(args) -> int:
    x = stats.read_summary(args.x)
    y = stats.read_summary(args.y)
    v = frechet.csi(x, y, ridge=args.ridge)
    print(f"csi({x.name}, {y.name}) = {v.value:.6g} (mean {v.mean_term:.6g}, trace {v.trace_term:.6g})")
    if args.output:
        doc = {
            "x": x.name,
            "y": y.name,
            "value": v.value,
            "mean_term": v.mean_term,
            "trace_term": v.trace_term,
            "clamped_eigenvalues": v.clamped_eigenvalues,
            "ridge": args.ridge,
        }
        Path(args.output).write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return EX_OK


def _cmd_rank(args) -> int:
    if (args.epochs is None) != (args.samples is None):
        raise ValueError("--epochs and --samples must be given together")
    budget = None
    if args.epochs is not None:
        budget = select.make_budget(args.epochs, args.samples)
    downstream = [stats.read_summary(p) for p in args.downstream]
    upstream = [stats.read_summary(p) for p in args.upstream]
    report = select.rank_upstreams(upstream, downstream[0], budget=budget, ridge=args.ridge)
    select.write_report(report, args.output)
    print(report.render_table())
    if len(downstream) > 1:
        matrix = frechet.csi_matrix(upstream, downstream, ridge=args.ridge)
        matrix_path = args.matrix or str(args.output) + ".matrix.csv"
        frechet.write_csi_matrix_csv(
            matrix_path, [u.name for u in upstream], [d.name for d in downstream], matrix
        )
        print(f"matrix -> {matrix_path}")
    return EX_OK


def _cmd_erank(args) -> int:
    shard = read_shard(args.shard)
    study = spectral.paired_erank_study(shard, ks=args.ks, repeats=args.repeats, seed=args.seed)
    output = Path(args.output)
    spectral.write_study_csv(output, study)
    summary_path = args.summary_output or str(output) + ".summary.csv"
    spectral.write_study_summary_csv(summary_path, study)
    _write_meta(output, "erank", args.seed, {"ks": list(args.ks), "repeats": args.repeats})
    for k, node_rep, graph_rep in study:
        print(
            f"k={k}: node {node_rep.mean:.4g} +/- {node_rep.std:.4g}, "
            f"graph {graph_rep.mean:.4g} +/- {graph_rep.std:.4g}"
        )
    return EX_OK


def _cmd_sample(args) -> int:
    shard = read_shard(args.shard)
    index = sampling.build_class_index(shard)
    if args.strategy == "balanced":
        indices = sampling.balanced_indices(index, args.total, seed=args.seed)
    else:
        indices = sampling.uniform_indices(shard, args.total, seed=args.seed)
    name = f"{shard.name}-{args.strategy}-{args.total}"
    sample = sampling.subset_shard(shard, indices, name=name)
    manifest = read_manifest(args.shard)
    labels = manifest.class_labels if manifest else None
    write_shard(
        sample,
        args.output,
        class_labels=labels,
        extra={"seed": args.seed, "strategy": args.strategy, "total": args.total},
    )
    report = sampling.coverage_report(index, sample)
    if args.coverage:
        sampling.write_coverage_csv(args.coverage, report, labels=labels)
    covered = sum(1 for got, _ in report.values() if got > 0)
    print(f"{name}: {sample.graph_count} graphs, {covered}/{index.class_count} classes covered")
    return EX_OK


def _cmd_budget(args) -> int:
    if args.samples is not None:
        spec = select.make_budget(args.epochs, args.samples)
    else:
        spec = select.make_budget(args.epochs, select.plan_samples(args.budget, args.epochs))
    print(f"budget {spec.budget} = {spec.epochs} epochs x {spec.samples} samples")
    if args.output:
        Path(args.output).write_text(
            json.dumps(spec.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return EX_OK


def _cmd_gen_synthetic(args) -> int:
    class_ids = None
    if args.zipf is not None:
        class_ids = synthetic.zipf_class_ids(args.graphs, args.classes, args.zipf, seed=args.seed)
    shard = synthetic.make_gaussian_shard(
        name=args.name,
        dim=args.dim,
        graphs=args.graphs,
        nodes_per_graph=args.nodes,
        classes=args.classes,
        class_sep=args.class_sep,
        noise=args.noise,
        pooled_subspace=args.pooled_subspace,
        class_ids=class_ids,
        seed=args.seed,
    )
    params = {
        "seed": args.seed,
        "dim": args.dim,
        "graphs": args.graphs,
        "nodes": args.nodes,
        "classes": args.classes,
        "class_sep": args.class_sep,
        "noise": args.noise,
        "pooled_subspace": args.pooled_subspace,
        "zipf": args.zipf,
    }
    write_shard(shard, args.output, extra=params)
    print(f"{shard.name}: {shard.graph_count} graphs, {shard.total_nodes} nodes -> {args.output}")
    return EX_OK


def _apply_config(sub: argparse.ArgumentParser, config: dict) -> None:
    dests = {a.dest for a in sub._actions}
    sub.set_defaults(**{k: v for k, v in config.items() if k in dests})


def build_parser(config: dict | None = None) -> _Parser:
    parser = _Parser(prog="chemalign", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of default flag values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="moment summary of a shard")
    p.add_argument("shard")
    p.add_argument("-o", "--output", default=None, help="default: shard path with .csm1 suffix")
    p.add_argument("--nodes", choices=sorted(_NODE_POLICIES), default="all")
    p.add_argument("--name", default=None, help="default: shard name")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ddof", type=int, choices=(0, 1), default=1,
                   help="covariance denominator n-ddof")
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("distance", help="similarity index between two summaries")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("-o", "--output", default=None, help="optional JSON result")
    p.add_argument("--ridge", type=float, default=0.0)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("rank", help="rank upstream summaries against a downstream")
    p.add_argument("--downstream", nargs="+", required=True)
    p.add_argument("--upstream", nargs="+", required=True)
    p.add_argument("-o", "--output", required=True, help="JSON report path")
    p.add_argument("--matrix", default=None,
                   help="CSV matrix path when multiple downstreams (default: <output>.matrix.csv)")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--ridge", type=float, default=0.0)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("erank", help="paired node/graph effective-rank study")
    p.add_argument("shard")
    p.add_argument("-o", "--output", required=True, help="per-repeat CSV path")
    p.add_argument("--summary-output", default=None, help="default: <output>.summary.csv")
    p.add_argument("--ks", type=int, nargs="+", default=[5000, 10000, 15000])
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_erank)

    p = sub.add_parser("sample", help="subsample a shard")
    p.add_argument("shard")
    p.add_argument("-o", "--output", required=True, help="sampled shard path")
    p.add_argument("--total", type=int, default=sampling.DEFAULT_TOTAL)
    p.add_argument("--strategy", choices=("balanced", "uniform"), default="balanced")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coverage", default=None, help="optional per-class coverage CSV")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("budget", help="compute or plan a pretraining budget")
    p.add_argument("--epochs", type=int, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--samples", type=int, default=None)
    mode.add_argument("--budget", type=int, default=None, help="plan samples from a total budget")
    p.add_argument("-o", "--output", default=None, help="optional JSON result")
    p.set_defaults(func=_cmd_budget)

    p = sub.add_parser("gen-synthetic", help="generate a synthetic shard")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--graphs", type=int, required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--class-sep", type=float, default=4.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--pooled-subspace", type=int, default=None)
    p.add_argument("--zipf", type=float, default=None,
                   help="draw class ids from a power law with this exponent")
    p.add_argument("--name", default="synthetic")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen_synthetic)

    if config:
        for sp in sub.choices.values():
            _apply_config(sp, config)
    return parser


def _load_config(argv: list[str]) -> tuple[dict | None, int]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}, EX_OK
    try:
        text = Path(known.config).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return None, EX_IO
    try:
        config = json.loads(text)
        if not isinstance(config, dict):
            raise ValueError(f"{known.config}: config must be a JSON object")
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return None, EX_DATA
    return config, EX_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    config, code = _load_config(argv)
    if config is None:
        return code
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EX_USAGE
    try:
        return args.func(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_IO
    except (ChemalignError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
