from __future__ import annotations

import itertools
from random import Random

import pytest

from conftest import grouping, modularity_direct, random_graph, random_labels, wlogv_direct
from dyncomm.engine import (
    Dendrogram,
    Objective,
    SweepConfig,
    flatten,
    induced_graph,
    one_level,
    run_static,
)
from dyncomm.errors import EmptyGraphError
from dyncomm.graph import Graph, graph_from_edges
from dyncomm.objectives import Partition, modularity, wlogv


def test_one_level_finds_the_two_communities(two_community_graph: Graph) -> None:
    # brute force over all bipartitions: {0..4} vs {5..9} maximizes Q
    best_q, best_split = -1.0, None
    nodes = range(10)
    for bits in itertools.product((0, 1), repeat=9):
        labels = [0] + list(bits)
        q = modularity_direct(two_community_graph, labels)
        if q > best_q:
            best_q, best_split = q, labels
    assert grouping(best_split) == {frozenset(range(5)), frozenset(range(5, 10))}

    # the expected split is single-move stable: no node move improves Q
    stable = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]
    q0 = modularity_direct(two_community_graph, stable)
    for i in nodes:
        for target in (0, 1, 2):
            moved = list(stable)
            moved[i] = target
            assert modularity_direct(two_community_graph, moved) <= q0 + 1e-12

    # and the greedy sweep reaches it from singletons
    p, improved = one_level(
        two_community_graph, Partition.singletons(two_community_graph), range(10), SweepConfig(rng_seed=1)
    )
    assert improved
    assert grouping(p.assignment) == {frozenset(range(5)), frozenset(range(5, 10))}


def test_one_level_reports_no_improvement_when_stable(two_community_graph: Graph) -> None:
    p = Partition(two_community_graph, [0, 0, 0, 0, 0, 1, 1, 1, 1, 1])
    p2, improved = one_level(two_community_graph, p, range(10), SweepConfig(rng_seed=4))
    assert not improved
    assert p2.assignment == [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]


def test_one_level_only_moves_candidates() -> None:
    rng = Random(19)
    g = random_graph(rng, 20, p=0.2)
    start = list(range(20))
    p = Partition(g, start)
    candidates = [0, 1, 2, 3, 4]
    p, _ = one_level(g, p, candidates, SweepConfig(rng_seed=2))
    for node in range(5, 20):
        assert p.assignment[node] == start[node]


def test_one_level_improves_objective() -> None:
    rng = Random(43)
    for objective in (Objective.MODULARITY, Objective.WLOGV):
        for _ in range(15):
            n = rng.randint(3, 30)
            g = random_graph(rng, n, weighted=True)
            labels = random_labels(rng, n, n)
            p = Partition(g, labels)
            score = modularity if objective is Objective.MODULARITY else wlogv
            before = score(p)
            p, _ = one_level(g, p, range(n), SweepConfig(objective, rng.randrange(100)))
            assert score(p) >= before - 1e-12


def test_tie_break_prefers_lowest_cluster_id() -> None:
    # node 0 sits between two identical neighbors; only node 0 may move
    g = graph_from_edges(3, [(0, 1, 1.0), (0, 2, 1.0)])
    p = Partition(g, [0, 1, 2])
    p, improved = one_level(g, p, [0], SweepConfig(rng_seed=0))
    assert improved
    assert p.assignment[0] == 1


def test_min_gain_blocks_marginal_moves() -> None:
    g = graph_from_edges(2, [(0, 1, 1.0)])
    p, improved = one_level(g, Partition.singletons(g), range(2), SweepConfig(min_gain=10.0))
    assert not improved
    assert p.assignment == [0, 1]


def test_induced_graph_preserves_weight_and_stats() -> None:
    rng = Random(47)
    for _ in range(30):
        n = rng.randint(2, 30)
        g = random_graph(rng, n, weighted=True, loops=True)
        labels = random_labels(rng, n, rng.randint(1, 6))
        p = Partition(g, labels)
        coarse, mapping = induced_graph(g, p)
        assert coarse.n_nodes == p.n_clusters()
        assert coarse.total_weight == pytest.approx(g.total_weight, abs=1e-9)
        for c in set(labels):
            sn = mapping[c]
            assert coarse.weight(sn, sn) == pytest.approx(p.sum_in[c], abs=1e-9)
            assert coarse.strength(sn) == pytest.approx(p.sum_tot[c], abs=1e-9)


def test_coarsening_preserves_objectives() -> None:
    rng = Random(53)
    for _ in range(50):
        n = rng.randint(2, 40)
        g = random_graph(rng, n, weighted=True)
        labels = random_labels(rng, n, rng.randint(1, 8))
        p = Partition(g, labels)
        coarse, _ = induced_graph(g, p)
        singles = Partition.singletons(coarse)
        assert modularity(p) == pytest.approx(modularity(singles), abs=1e-12)
        assert wlogv(p) == pytest.approx(wlogv(singles), abs=1e-12)


def test_run_static_is_deterministic() -> None:
    rng = Random(59)
    for seed in (0, 1, 17):
        g = random_graph(rng, 40, p=0.12)
        a = run_static(g, SweepConfig(Objective.MODULARITY, seed))
        b = run_static(g, SweepConfig(Objective.MODULARITY, seed))
        assert a == b
        assert isinstance(a, Dendrogram)


def test_run_static_level_shapes() -> None:
    rng = Random(61)
    g = random_graph(rng, 50, p=0.1)
    d = run_static(g, SweepConfig(rng_seed=3))
    for level in d.levels:
        assert level.induced.n_nodes == level.partition.n_clusters()
    for prev, nxt in zip(d.levels, d.levels[1:]):
        assert nxt.graph is prev.induced
        assert nxt.graph.n_nodes < prev.graph.n_nodes
    # flattened labels are dense 0..k-1, first seen in node order
    labels = d.final_partition
    seen: list[int] = []
    for c in labels:
        if c not in seen:
            seen.append(c)
    assert seen == list(range(len(seen)))
    assert len(labels) == 50


def test_flatten_composes_levels(two_community_graph: Graph) -> None:
    d = run_static(two_community_graph, SweepConfig(rng_seed=1))
    assert grouping(d.final_partition) == {frozenset(range(5)), frozenset(range(5, 10))}
    assert flatten(d.levels) == d.final_partition


def test_run_static_beats_singletons() -> None:
    rng = Random(67)
    for objective, score in ((Objective.MODULARITY, modularity), (Objective.WLOGV, wlogv)):
        for _ in range(10):
            g = random_graph(rng, rng.randint(3, 40), p=0.15, weighted=True)
            d = run_static(g, SweepConfig(objective, rng.randrange(1000)))
            base = score(Partition.singletons(g))
            assert score(Partition(g, d.final_partition)) >= base - 1e-12


def test_run_static_single_node() -> None:
    g = Graph(1)
    d = run_static(g, SweepConfig())
    assert d.final_partition == [0]
    assert modularity(Partition(g, d.final_partition)) == 0.0


def test_run_static_rejects_empty_graph() -> None:
    with pytest.raises(EmptyGraphError):
        run_static(Graph(0), SweepConfig())


def test_isolated_nodes_stay_singletons() -> None:
    g = graph_from_edges(4, [(0, 1, 1.0)])
    d = run_static(g, SweepConfig(rng_seed=5))
    labels = d.final_partition
    assert labels[0] == labels[1]
    assert len({labels[2], labels[3], labels[0]}) == 3
