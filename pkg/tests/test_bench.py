from __future__ import annotations

import io
import math
from random import Random

import pytest

from dyncomm.bench import (
    ALGORITHMS,
    ExperimentConfig,
    StepRecord,
    desk_scale_preset,
    format_summary,
    read_csv,
    run_experiment,
    summarize,
    write_csv,
)
from dyncomm.dynamic import UNBOUNDED
from dyncomm.errors import InvalidParamsError, MissingBaselineError
from dyncomm.generator import (
    GeneratorConfig,
    generate_dyn_graph,
    random_step_specs,
)


@pytest.fixture(scope="module")
def small_stream():
    specs = random_step_specs(30, 3, 2, 3, Random(51))
    cfg = GeneratorConfig(specs, m=2, intermediate_steps=3, rng_seed=51)
    return generate_dyn_graph(cfg)[0]


def test_record_grid_covers_every_cell(small_stream) -> None:
    cfg = ExperimentConfig(small_stream, delete_ranges=(0, 1), repetitions=2)
    records = run_experiment(cfg)
    n_steps = len(small_stream.steps) + 1
    assert len(records) == n_steps * (2 + 2 * 2)  # 2 static + 2 dyn x 2 ranges
    by_key = {(r.step, r.algorithm, r.delete_range) for r in records}
    assert len(by_key) == len(records)
    for rec in records:
        assert rec.time_s >= 0.0
        assert rec.clusters >= 1
        if rec.algorithm.endswith("-dyn"):
            assert rec.delete_range in (0, 1)
            assert 0 <= rec.frontier <= 30
        else:
            assert rec.delete_range is None
            assert rec.frontier == 30  # static always re-touches everything


def test_step_zero_shares_one_measurement_across_ranges(small_stream) -> None:
    cfg = ExperimentConfig(small_stream, delete_ranges=(0, 1, 2), repetitions=1, warmup=False)
    records = run_experiment(cfg)
    zero = [r for r in records if r.step == 0 and r.algorithm == "louvain-dyn"]
    assert len(zero) == 3
    assert len({r.time_s for r in zero}) == 1
    assert len({r.modularity for r in zero}) == 1


def test_unbounded_dynamic_matches_static_quality(small_stream) -> None:
    cfg = ExperimentConfig(
        small_stream, delete_ranges=(UNBOUNDED,), repetitions=1, warmup=False
    )
    records = run_experiment(cfg)
    for base in ("louvain", "infomap"):
        static = {r.step: r for r in records if r.algorithm == base}
        dyn = {r.step: r for r in records if r.algorithm == base + "-dyn"}
        assert set(static) == set(dyn)
        for step, srec in static.items():
            drec = dyn[step]
            assert drec.modularity == pytest.approx(srec.modularity, abs=1e-12)
            assert drec.wlogv == pytest.approx(srec.wlogv, abs=1e-12)
            assert drec.clusters == srec.clusters


def test_summarize_recomputes_percentages(small_stream) -> None:
    cfg = ExperimentConfig(small_stream, delete_ranges=(1,), repetitions=1, warmup=False)
    records = run_experiment(cfg)
    rows = summarize(records)
    assert [r.algorithm for r in rows[:2]] == ["infomap", "louvain"]
    by_algo = {(r.algorithm, r.delete_range): r for r in rows}
    static = by_algo[("louvain", None)]
    dyn = by_algo[("louvain-dyn", 1)]
    recs = [r for r in records if r.algorithm == "louvain-dyn"]
    mean_t = sum(r.time_s for r in recs) / len(recs)
    mean_q = sum(r.modularity for r in recs) / len(recs)
    assert dyn.steps == len(recs)
    assert dyn.mean_time_s == pytest.approx(mean_t)
    assert dyn.time_pct == pytest.approx(100.0 * mean_t / static.mean_time_s)
    assert dyn.modularity_pct == pytest.approx(100.0 * mean_q / static.mean_modularity)
    assert static.time_pct is None and static.modularity_pct is None


def test_summarize_identical_records_give_100_percent() -> None:
    records = [
        StepRecord(0, "louvain", None, 2.0, 0.5, 1.0, 3, 10),
        StepRecord(0, "louvain-dyn", 1, 2.0, 0.5, 1.0, 3, 4),
    ]
    row = summarize(records)[1]
    assert row.time_pct == pytest.approx(100.0)
    assert row.modularity_pct == pytest.approx(100.0)
    assert row.wlogv_pct == pytest.approx(100.0)


def test_summarize_requires_static_baseline() -> None:
    records = [StepRecord(0, "louvain-dyn", 1, 1.0, 0.5, 1.0, 3, 4)]
    with pytest.raises(MissingBaselineError):
        summarize(records)


def test_summary_orders_dynamic_rows_by_range() -> None:
    records = [
        StepRecord(0, "louvain", None, 1.0, 0.5, 1.0, 3, 10),
        StepRecord(0, "louvain-dyn", UNBOUNDED, 1.0, 0.5, 1.0, 3, 10),
        StepRecord(0, "louvain-dyn", 0, 1.0, 0.5, 1.0, 3, 1),
        StepRecord(0, "louvain-dyn", 2, 1.0, 0.5, 1.0, 3, 5),
    ]
    rows = summarize(records)
    assert [r.delete_range for r in rows[1:]] == [0, 2, UNBOUNDED]


def test_csv_round_trip(small_stream) -> None:
    cfg = ExperimentConfig(
        small_stream,
        algorithms=("louvain", "louvain-dyn"),
        delete_ranges=(1, UNBOUNDED),
        repetitions=1,
        warmup=False,
    )
    records = run_experiment(cfg)
    buf = io.StringIO()
    write_csv(records, buf)
    buf.seek(0)
    assert read_csv(buf) == records
    header = buf.getvalue().splitlines()[0]
    assert header == "step,algorithm,delete_range,time_s,modularity,wlogv,clusters,frontier"


def test_csv_rejects_foreign_header() -> None:
    with pytest.raises(InvalidParamsError):
        read_csv(io.StringIO("a,b,c\n1,2,3\n"))


def test_csv_of_no_records_is_header_only() -> None:
    buf = io.StringIO()
    write_csv([], buf)
    assert buf.getvalue().splitlines() == [
        "step,algorithm,delete_range,time_s,modularity,wlogv,clusters,frontier"
    ]


def test_csv_of_one_record_is_two_lines() -> None:
    buf = io.StringIO()
    write_csv([StepRecord(0, "louvain", None, 0.1, 0.5, 1.0, 3, 10)], buf)
    assert len(buf.getvalue().splitlines()) == 2


def test_records_come_out_ordered_by_step_algorithm_range(small_stream) -> None:
    cfg = ExperimentConfig(small_stream, delete_ranges=(2, 0), repetitions=1, warmup=False)
    records = run_experiment(cfg)
    keys = [
        (r.step, r.algorithm, math.inf if r.delete_range is None else float(r.delete_range))
        for r in records
    ]
    assert keys == sorted(keys)


def test_single_snapshot_louvain_smoke(small_stream) -> None:
    from dyncomm.graph import DynamicGraph

    one = DynamicGraph(small_stream.initial, [])
    records = run_experiment(
        ExperimentConfig(one, algorithms=("louvain",), repetitions=1, warmup=False)
    )
    assert len(records) == 1
    assert -1.0 <= records[0].modularity <= 1.0
    assert records[0].time_s > 0.0


def test_experiment_validates_params(small_stream) -> None:
    with pytest.raises(InvalidParamsError):
        run_experiment(ExperimentConfig(small_stream, algorithms=("leiden",)))
    with pytest.raises(InvalidParamsError):
        run_experiment(ExperimentConfig(small_stream, repetitions=0))


def test_generator_config_accepted_as_input() -> None:
    specs = random_step_specs(20, 2, 2, 2, Random(3))
    gen = GeneratorConfig(specs, m=2, intermediate_steps=2, rng_seed=3)
    records = run_experiment(
        ExperimentConfig(gen, algorithms=("louvain",), repetitions=1, warmup=False)
    )
    assert {r.step for r in records} == {0, 1, 2}


def test_format_summary_is_aligned_text(small_stream) -> None:
    cfg = ExperimentConfig(small_stream, delete_ranges=(1,), repetitions=1, warmup=False)
    text = format_summary(summarize(run_experiment(cfg)))
    lines = text.splitlines()
    assert lines[0].split() == [
        "algorithm", "range", "steps", "time_s", "modularity", "wlogv",
        "time%", "mod%", "wlogv%",
    ]
    assert len(lines) == 1 + 4
    assert any(line.startswith("louvain-dyn") for line in lines)


def test_high_change_rate_keeps_speedup_and_quality() -> None:
    # the heavier sibling of the default preset: 100 changes per step
    cfg = desk_scale_preset(rng_seed=4, n_steps=12, changes_per_step=100)
    records = run_experiment(
        ExperimentConfig(
            cfg,
            algorithms=("louvain", "louvain-dyn"),
            delete_ranges=(1,),
            repetitions=1,
            warmup=False,
        )
    )
    rows = {(r.algorithm, r.delete_range): r for r in summarize(records)}
    dyn = rows[("louvain-dyn", 1)]
    assert dyn.time_pct < 100.0
    assert dyn.modularity_pct > 97.0


def test_desk_scale_preset_shape() -> None:
    cfg = desk_scale_preset(rng_seed=1, n_nodes=100, n_steps=12, changes_per_step=4,
                            clusters_min=3, clusters_max=5, m=2)
    assert cfg.changes_per_step == 4
    assert cfg.max_total_steps == 12
    dyn, _ = generate_dyn_graph(cfg)
    assert len(dyn.steps) == 12
    assert all(len(cs.changes) <= 4 for cs in dyn.steps)
    assert dyn.initial.n_nodes == 100


def test_algorithm_names_stay_stable() -> None:
    assert ALGORITHMS == ("louvain", "louvain-dyn", "infomap", "infomap-dyn")
    assert math.isinf(UNBOUNDED)
