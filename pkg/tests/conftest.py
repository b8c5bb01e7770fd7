"""Shared fixtures and independent metric oracles.

The oracles recompute objectives straight from edges and labels, without
touching the package's incremental bookkeeping, so tests can pin the fast
paths against them.
"""

from __future__ import annotations

import math
from random import Random

import pytest

from dyncomm.graph import Graph, graph_from_edges

# Hand-checkable 10-node graph: two 5-node communities (0-4 and 5-9)
# bridged by (2,9), (0,6) and (4,6); (6,8) is the edge the dynamic tests
# toggle.
TWO_COMMUNITY_EDGES = [
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (1, 4), (3, 4),
    (5, 6), (5, 7), (5, 8), (6, 8), (7, 8), (7, 9), (8, 9),
    (2, 9), (0, 6), (4, 6),
]


@pytest.fixture
def two_community_graph() -> Graph:
    return graph_from_edges(10, [(u, v, 1.0) for u, v in TWO_COMMUNITY_EDGES])


@pytest.fixture
def two_triangles() -> Graph:
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    return graph_from_edges(6, [(u, v, 1.0) for u, v in edges])


def random_graph(rng: Random, n: int, p: float = 0.15, *, weighted: bool = False, loops: bool = False) -> Graph:
    """Erdos-Renyi style graph; at least one edge is guaranteed."""
    g = Graph(n)
    for u in range(n):
        for v in range(u if loops else u + 1, n):
            if rng.random() < p:
                w = rng.choice((0.5, 1.0, 1.5, 2.0, 3.0)) if weighted else 1.0
                g.add_edge(u, v, w)
    if g.total_weight == 0:
        g.add_edge(0, min(1, n - 1) if n > 1 else 0, 1.0)
    return g


def random_labels(rng: Random, n: int, n_clusters: int) -> list[int]:
    """Random assignment using cluster ids 0..n_clusters-1 (not all need
    appear)."""
    return [rng.randrange(n_clusters) for _ in range(n)]


def modularity_direct(g: Graph, labels: list[int]) -> float:
    """Per-cluster modularity recomputed from scratch."""
    m = g.total_weight
    if m <= 0:
        return 0.0
    intra: dict[int, float] = {}
    vol: dict[int, float] = {}
    for u, v, w in g.edges():
        if labels[u] == labels[v]:
            intra[labels[u]] = intra.get(labels[u], 0.0) + w
    for i in range(g.n_nodes):
        vol[labels[i]] = vol.get(labels[i], 0.0) + g.strength(i)
    return sum(
        intra.get(c, 0.0) / m - (vol[c] / (2.0 * m)) ** 2 for c in vol
    )


def wlogv_direct(g: Graph, labels: list[int], base: float = 10.0) -> float:
    """Cluster-volume entropy recomputed from scratch."""
    m = g.total_weight
    big_m = 2.0 * m
    intra: dict[int, float] = {}
    vol: dict[int, float] = {}
    for u, v, w in g.edges():
        if labels[u] == labels[v]:
            intra[labels[u]] = intra.get(labels[u], 0.0) + w
    for i in range(g.n_nodes):
        vol[labels[i]] = vol.get(labels[i], 0.0) + g.strength(i)
    s = 0.0
    for c, v in vol.items():
        w_c = 2.0 * intra.get(c, 0.0)
        if w_c > 0.0:
            s -= (w_c / big_m) * math.log(v / big_m, base)
    return s


def grouping(labels: list[int]) -> set[frozenset[int]]:
    """Partition as a set of node sets, for id-agnostic comparison."""
    by_label: dict[int, set[int]] = {}
    for node, c in enumerate(labels):
        by_label.setdefault(c, set()).add(node)
    return {frozenset(nodes) for nodes in by_label.values()}
