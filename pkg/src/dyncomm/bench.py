"""Static-versus-dynamic benchmark over a dynamic graph stream.

Every algorithm clusters every step; static variants start from scratch,
dynamic variants update their carried partition locally per delete range.
Only the clustering call sits inside the timed interval; quality metrics
and I/O are computed outside it. Quality is always reported under both
objectives so the variants can be cross-compared.
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from dataclasses import dataclass
from random import Random
from typing import TextIO

from .dynamic import DeleteRange, DynamicState, evaluate, noise_filter, run_dynamic_step
from .engine import Objective, SweepConfig, run_static
from .errors import InvalidParamsError, MissingBaselineError
from .generator import GeneratorConfig, generate_dyn_graph, varied_step_specs
from .graph import DynamicGraph, apply_changes, load_stream_path

ALGORITHMS = ("louvain", "louvain-dyn", "infomap", "infomap-dyn")

_OBJECTIVES = {
    "louvain": Objective.MODULARITY,
    "louvain-dyn": Objective.MODULARITY,
    "infomap": Objective.WLOGV,
    "infomap-dyn": Objective.WLOGV,
}

CSV_HEADER = ("step", "algorithm", "delete_range", "time_s", "modularity", "wlogv", "clusters", "frontier")


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark run.

    input may be a stream file path, a generator config, or an in-memory
    dynamic graph. With warmup on and more than one repetition, the first
    repetition of every measurement is dropped from the time average.
    """

    input: DynamicGraph | GeneratorConfig | str
    algorithms: tuple[str, ...] = ALGORITHMS
    delete_ranges: tuple[DeleteRange, ...] = (1,)
    repetitions: int = 3
    warmup: bool = True
    rng_seed: int = 0
    min_cluster_size: int = 2


@dataclass(frozen=True)
class StepRecord:
    """One measured (step, algorithm, delete range) cell."""

    step: int
    algorithm: str
    delete_range: DeleteRange | None
    time_s: float
    modularity: float
    wlogv: float
    clusters: int
    frontier: int


@dataclass(frozen=True)
class SummaryRow:
    """Per-algorithm means; dynamic rows carry percentages of their static
    baseline."""

    algorithm: str
    delete_range: DeleteRange | None
    steps: int
    mean_time_s: float
    mean_modularity: float
    mean_wlogv: float
    time_pct: float | None = None
    modularity_pct: float | None = None
    wlogv_pct: float | None = None


def _resolve_input(source: DynamicGraph | GeneratorConfig | str) -> DynamicGraph:
    if isinstance(source, DynamicGraph):
        return source
    if isinstance(source, GeneratorConfig):
        return generate_dyn_graph(source)[0]
    return load_stream_path(source)


def _mean_time(times: list[float], warmup: bool) -> float:
    if warmup and len(times) > 1:
        times = times[1:]
    return statistics.fmean(times)


def _record_order(rec: StepRecord) -> tuple[str, float]:
    return rec.algorithm, math.inf if rec.delete_range is None else float(rec.delete_range)


def run_experiment(cfg: ExperimentConfig) -> list[StepRecord]:
    """Replay the stream, measuring every requested algorithm per step."""
    for name in cfg.algorithms:
        if name not in _OBJECTIVES:
            raise InvalidParamsError(f"unknown algorithm {name!r}")
    if cfg.repetitions < 1:
        raise InvalidParamsError("repetitions must be positive")
    dyn_graph = _resolve_input(cfg.input)
    static_algos = [a for a in cfg.algorithms if not a.endswith("-dyn")]
    dyn_algos = [a for a in cfg.algorithms if a.endswith("-dyn")]
    reps = cfg.repetitions

    records: list[StepRecord] = []
    states: dict[tuple[str, DeleteRange], DynamicState] = {}

    g = dyn_graph.initial
    n = g.n_nodes
    first: list[StepRecord] = []
    for algo in static_algos:
        sweep = SweepConfig(_OBJECTIVES[algo], cfg.rng_seed)
        times = []
        dendro = None
        for _ in range(reps):
            t0 = time.perf_counter()
            dendro = run_static(g, sweep)
            times.append(time.perf_counter() - t0)
        q, s, k = evaluate(g, noise_filter(dendro.final_partition, cfg.min_cluster_size))
        first.append(StepRecord(0, algo, None, _mean_time(times, cfg.warmup), q, s, k, n))
    for algo in dyn_algos:
        # the first graph gets a full static pass, which seeds the state
        sweep = SweepConfig(_OBJECTIVES[algo], cfg.rng_seed)
        times = []
        dendro = None
        for _ in range(reps):
            t0 = time.perf_counter()
            dendro = run_static(g, sweep)
            times.append(time.perf_counter() - t0)
        raw = dendro.final_partition
        q, s, k = evaluate(g, noise_filter(raw, cfg.min_cluster_size))
        mean_t = _mean_time(times, cfg.warmup)
        for r in cfg.delete_ranges:
            first.append(StepRecord(0, algo, r, mean_t, q, s, k, n))
            states[(algo, r)] = DynamicState(g, list(raw), 0, None)
    records.extend(sorted(first, key=_record_order))

    for ordinal, cs in enumerate(dyn_graph.steps, start=1):
        g = apply_changes(g, cs)
        current: list[StepRecord] = []
        for algo in static_algos:
            sweep = SweepConfig(_OBJECTIVES[algo], cfg.rng_seed + ordinal)
            times = []
            dendro = None
            for _ in range(reps):
                t0 = time.perf_counter()
                dendro = run_static(g, sweep)
                times.append(time.perf_counter() - t0)
            q, s, k = evaluate(g, noise_filter(dendro.final_partition, cfg.min_cluster_size))
            current.append(
                StepRecord(cs.step_index, algo, None, _mean_time(times, cfg.warmup), q, s, k, n)
            )
        for algo in dyn_algos:
            sweep = SweepConfig(_OBJECTIVES[algo], cfg.rng_seed + ordinal)
            for r in cfg.delete_ranges:
                state = states[(algo, r)]
                times = []
                result = None
                for _ in range(reps):
                    _, result = run_dynamic_step(state, cs, r, sweep, cfg.min_cluster_size)
                    times.append(result.metrics.time_s)
                metrics = result.metrics
                current.append(
                    StepRecord(
                        cs.step_index,
                        algo,
                        r,
                        _mean_time(times, cfg.warmup),
                        metrics.modularity,
                        metrics.wlogv,
                        metrics.clusters,
                        metrics.frontier_size,
                    )
                )
                states[(algo, r)] = result
        records.extend(sorted(current, key=_record_order))
    return records


def summarize(records: list[StepRecord]) -> list[SummaryRow]:
    """Means per algorithm (and delete range), with dynamic rows expressed
    as percentages of their static counterpart's means.

    Raises MissingBaselineError when a dynamic algorithm appears without
    its static twin.
    """
    static: dict[str, list[StepRecord]] = {}
    dynamic: dict[tuple[str, DeleteRange], list[StepRecord]] = {}
    for rec in records:
        if rec.algorithm.endswith("-dyn"):
            dynamic.setdefault((rec.algorithm, rec.delete_range), []).append(rec)
        else:
            static.setdefault(rec.algorithm, []).append(rec)

    def means(recs: list[StepRecord]) -> tuple[float, float, float]:
        return (
            statistics.fmean(r.time_s for r in recs),
            statistics.fmean(r.modularity for r in recs),
            statistics.fmean(r.wlogv for r in recs),
        )

    rows: list[SummaryRow] = []
    for base in sorted(static):
        t, q, s = means(static[base])
        rows.append(SummaryRow(base, None, len(static[base]), t, q, s))
    for algo, r in sorted(dynamic, key=lambda key: (key[0], math.inf if key[1] is None else float(key[1]))):
        recs = dynamic[(algo, r)]
        base = algo[: -len("-dyn")]
        if base not in static:
            raise MissingBaselineError(f"no static {base!r} records to compare {algo!r} against")
        bt, bq, bs = means(static[base])
        t, q, s = means(recs)
        rows.append(
            SummaryRow(
                algo,
                r,
                len(recs),
                t,
                q,
                s,
                time_pct=100.0 * t / bt,
                modularity_pct=100.0 * q / bq,
                wlogv_pct=100.0 * s / bs,
            )
        )
    return rows


def _format_range(r: DeleteRange | None) -> str:
    if r is None:
        return ""
    if math.isinf(r):
        return "inf"
    return str(int(r))


def _parse_range(text: str) -> DeleteRange | None:
    if text == "":
        return None
    if text == "inf":
        return math.inf
    return int(text)


def write_csv(records: list[StepRecord], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(
            [
                rec.step,
                rec.algorithm,
                _format_range(rec.delete_range),
                repr(rec.time_s),
                repr(rec.modularity),
                repr(rec.wlogv),
                rec.clusters,
                rec.frontier,
            ]
        )


def write_csv_path(records: list[StepRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(records, fh)


def read_csv(fh: TextIO) -> list[StepRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise InvalidParamsError(f"unexpected CSV header {header!r}")
    return [
        StepRecord(
            int(row[0]),
            row[1],
            _parse_range(row[2]),
            float(row[3]),
            float(row[4]),
            float(row[5]),
            int(row[6]),
            int(row[7]),
        )
        for row in reader
    ]


def read_csv_path(path: str) -> list[StepRecord]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return read_csv(fh)


def format_summary(rows: list[SummaryRow]) -> str:
    """Plain-text summary table."""
    header = ("algorithm", "range", "steps", "time_s", "modularity", "wlogv", "time%", "mod%", "wlogv%")
    table = [header]
    for row in rows:
        table.append(
            (
                row.algorithm,
                _format_range(row.delete_range),
                str(row.steps),
                f"{row.mean_time_s:.6f}",
                f"{row.mean_modularity:.4f}",
                f"{row.mean_wlogv:.4f}",
                "" if row.time_pct is None else f"{row.time_pct:.2f}",
                "" if row.modularity_pct is None else f"{row.modularity_pct:.2f}",
                "" if row.wlogv_pct is None else f"{row.wlogv_pct:.2f}",
            )
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in table]
    return "\n".join(lines)


def desk_scale_preset(
    rng_seed: int = 0,
    n_nodes: int = 3000,
    n_steps: int = 200,
    changes_per_step: int = 10,
    clusters_min: int = 20,
    clusters_max: int = 30,
    m: int = 2,
) -> GeneratorConfig:
    """Generator recipe for the desk-scale comparison: evolving clustered
    graph, a fixed number of steps with roughly changes_per_step changes
    each."""
    phases = max(1, math.ceil(n_steps * changes_per_step / (n_nodes * m)))
    specs = varied_step_specs(n_nodes, phases + 1, clusters_min, clusters_max, Random(rng_seed))
    return GeneratorConfig(
        specs,
        m=m,
        changes_per_step=changes_per_step,
        max_total_steps=n_steps,
        rng_seed=rng_seed,
    )
