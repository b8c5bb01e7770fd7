"""Command-line entry points.

Exit codes: 0 on success, 1 for usage errors, 2 for data errors (unreadable
or malformed inputs, invalid parameter combinations at run time).
"""

from __future__ import annotations

import argparse
import math
import sys
from random import Random

from . import bench as bench_mod
from .dynamic import DeleteRange
from .errors import DynCommError
from .generator import GeneratorConfig, generate_dyn_graph, save_ground_truth_path, varied_step_specs
from .graph import save_stream_path

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; this project reserves 2
    # for data errors
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _parse_range(text: str) -> DeleteRange:
    if text.lower() == "inf":
        return math.inf
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("delete range must be non-negative")
    return value


def _parse_range_list(text: str) -> tuple[DeleteRange, ...]:
    return tuple(_parse_range(part.strip()) for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dyncomm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="generate a synthetic dynamic graph stream")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--clusters-min", type=int, required=True)
    gen.add_argument("--clusters-max", type=int, required=True)
    gen.add_argument("--m", type=int, default=2, help="preferential-attachment edges per node")
    gen.add_argument("--steps", type=int, default=2, help="number of predefined graph steps")
    pacing = gen.add_mutually_exclusive_group()
    pacing.add_argument("--intermediate", type=int, help="time steps per morph phase")
    pacing.add_argument("--changes-per-step", type=int, help="derive step count from diff size")
    gen.add_argument("--inter-edges", type=int, help="bridging edges per cluster merge (default: m)")
    gen.add_argument("--max-steps", type=int, help="truncate the stream after this many steps")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", required=True, help="stream file; ground truth goes to <output>.gt")

    clu = sub.add_parser("cluster", help="run one algorithm over a stream, one CSV row per step")
    clu.add_argument("--input", required=True)
    clu.add_argument("--algorithm", choices=bench_mod.ALGORITHMS, default="louvain")
    clu.add_argument("--delete-range", type=_parse_range, default=1, metavar="R|inf")
    clu.add_argument("--min-cluster-size", type=int, default=2)
    clu.add_argument("--seed", type=int, default=0)
    clu.add_argument("-o", "--output", required=True, help="per-step CSV")

    ben = sub.add_parser("bench", help="compare all algorithms over a stream")
    ben.add_argument("--input", required=True)
    ben.add_argument("--algorithms", default=",".join(bench_mod.ALGORITHMS), help="comma-separated subset")
    ben.add_argument("--delete-ranges", type=_parse_range_list, default=(1,), metavar="R[,R...]")
    ben.add_argument("--reps", type=int, default=3)
    ben.add_argument("--no-warmup", action="store_true", help="keep the first repetition in time averages")
    ben.add_argument("--min-cluster-size", type=int, default=2)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("-o", "--output", required=True, help="per-step CSV")
    ben.add_argument("--summary", action="store_true", help="print the aggregate table to stdout")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    specs = varied_step_specs(args.nodes, args.steps, args.clusters_min, args.clusters_max, Random(args.seed))
    cfg = GeneratorConfig(
        specs,
        m=args.m,
        inter_edges=args.inter_edges,
        intermediate_steps=args.intermediate,
        changes_per_step=args.changes_per_step,
        max_total_steps=args.max_steps,
        rng_seed=args.seed,
    )
    stream, truths = generate_dyn_graph(cfg)
    save_stream_path(stream, args.output)
    save_ground_truth_path(truths, args.output + ".gt")
    print(f"wrote {args.output} ({stream.initial.n_nodes} nodes, {len(stream.steps)} steps) and {args.output}.gt")
    return 0


def _cmd_cluster(args: argparse.Namespace) -> int:
    cfg = bench_mod.ExperimentConfig(
        input=args.input,
        algorithms=(args.algorithm,),
        delete_ranges=(args.delete_range,),
        repetitions=1,
        warmup=False,
        rng_seed=args.seed,
        min_cluster_size=args.min_cluster_size,
    )
    records = bench_mod.run_experiment(cfg)
    bench_mod.write_csv_path(records, args.output)
    print(f"wrote {args.output} ({len(records)} records)")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    algorithms = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
    cfg = bench_mod.ExperimentConfig(
        input=args.input,
        algorithms=algorithms,
        delete_ranges=args.delete_ranges,
        repetitions=args.reps,
        warmup=not args.no_warmup,
        rng_seed=args.seed,
        min_cluster_size=args.min_cluster_size,
    )
    records = bench_mod.run_experiment(cfg)
    bench_mod.write_csv_path(records, args.output)
    print(f"wrote {args.output} ({len(records)} records)")
    if args.summary:
        print(bench_mod.format_summary(bench_mod.summarize(records)))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "cluster": _cmd_cluster,
        "bench": _cmd_bench,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (DynCommError, OSError) as exc:
        print(f"dyncomm: error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
