"""Partition bookkeeping and the two optimization objectives.

Modularity follows the classic per-cluster form

    Q = sum_c [ l_c / m - (d_c / 2m)^2 ]

with l_c the intra-cluster weight (each edge once, loops once) and d_c the
summed member strengths. The second objective scores a partition by the
weighted cluster-volume entropy

    S = - sum_c (w_c / M) * log_b(v_c / M),    M = 2m

where w_c = 2 * l_c is the intra weight over ordered pairs and v_c = d_c.
S is reported with base-10 logs by default; the base only rescales S, so
optimization is base-independent. Clusters with zero intra weight
contribute nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyGraphError, UnknownClusterError, UnknownNodeError
from .graph import Graph

DEFAULT_LOG_BASE = 10.0


class Partition:
    """Node-to-cluster assignment with incrementally maintained stats.

    Per cluster c the arrays hold sum_in (l_c), sum_tot (d_c) and size.
    Unassigned nodes (mid-move) carry cluster id -1 and are in no stats.
    """

    __slots__ = ("graph", "assignment", "sum_in", "sum_tot", "sizes", "strengths")

    def __init__(self, graph: Graph, assignment: list[int] | None = None):
        n = graph.n_nodes
        if assignment is None:
            assignment = list(range(n))
        if len(assignment) != n:
            raise UnknownNodeError("assignment length must match node count")
        self.graph = graph
        self.assignment = list(assignment)
        adj = graph.adjacency
        self.strengths = [sum(nbrs.values()) + nbrs.get(i, 0.0) for i, nbrs in enumerate(adj)]
        n_ids = max(assignment, default=-1) + 1
        if any(c < 0 for c in assignment):
            raise UnknownClusterError("cluster ids must be non-negative")
        self.sum_in = [0.0] * n_ids
        self.sum_tot = [0.0] * n_ids
        self.sizes = [0] * n_ids
        for i in range(n):
            c = assignment[i]
            self.sum_tot[c] += self.strengths[i]
            self.sizes[c] += 1
        for u, v, w in graph.edges():
            if assignment[u] == assignment[v]:
                self.sum_in[assignment[u]] += w

    @classmethod
    def singletons(cls, graph: Graph) -> "Partition":
        return cls(graph)

    @property
    def n_ids(self) -> int:
        return len(self.sum_in)

    def cluster_of(self, i: int) -> int:
        return self.assignment[i]

    def stats(self, c: int) -> "ClusterStats":
        self._check_cluster(c)
        return ClusterStats(self.sum_in[c], self.sum_tot[c], self.sizes[c])

    def n_clusters(self) -> int:
        """Number of non-empty clusters."""
        return sum(1 for s in self.sizes if s > 0)

    def _check_cluster(self, c: int) -> None:
        if not 0 <= c < len(self.sum_in):
            raise UnknownClusterError(f"cluster {c} outside id range {len(self.sum_in)}")

    def links_to_cluster(self, i: int, c: int) -> float:
        """Weight from node i to members of cluster c, excluding i itself."""
        assignment = self.assignment
        return sum(w for j, w in self.graph.adjacency[i].items() if j != i and assignment[j] == c)

    def remove_node(self, i: int) -> None:
        """Take node i out of its cluster, updating stats in O(deg)."""
        c = self.assignment[i]
        if c < 0:
            raise UnknownClusterError(f"node {i} is not assigned")
        loop = self.graph.adjacency[i].get(i, 0.0)
        self._remove(i, c, self.links_to_cluster(i, c), loop)

    def insert_node(self, i: int, c: int) -> None:
        """Put the unassigned node i into cluster c, updating stats."""
        self._check_cluster(c)
        if self.assignment[i] >= 0:
            raise UnknownClusterError(f"node {i} is already assigned")
        loop = self.graph.adjacency[i].get(i, 0.0)
        self._insert(i, c, self.links_to_cluster(i, c), loop)

    # fast paths for the sweep loop, which has k_i_in already in hand
    def _remove(self, i: int, c: int, k_i_in: float, loop: float) -> None:
        self.sum_in[c] -= k_i_in + loop
        self.sum_tot[c] -= self.strengths[i]
        self.sizes[c] -= 1
        self.assignment[i] = -1

    def _insert(self, i: int, c: int, k_i_in: float, loop: float) -> None:
        self.sum_in[c] += k_i_in + loop
        self.sum_tot[c] += self.strengths[i]
        self.sizes[c] += 1
        self.assignment[i] = c

    def copy(self) -> "Partition":
        p = Partition.__new__(Partition)
        p.graph = self.graph
        p.assignment = list(self.assignment)
        p.sum_in = list(self.sum_in)
        p.sum_tot = list(self.sum_tot)
        p.sizes = list(self.sizes)
        p.strengths = self.strengths
        return p

    def move_context(self, i: int, source: int, target: int) -> "MoveContext":
        """Context for evaluating the insertion of i into target.

        Call with i already removed from its cluster; source is the cluster
        i came from (so the caller can score "stay" with target = source).
        """
        return MoveContext(
            partition=self,
            node=i,
            source=source,
            target=target,
            k_i=self.strengths[i],
            k_i_in_source=self.links_to_cluster(i, source),
            k_i_in_target=self.links_to_cluster(i, target),
        )


@dataclass(frozen=True)
class ClusterStats:
    """Snapshot of one cluster's accumulators."""

    sum_in: float
    sum_tot: float
    size: int

    @property
    def w(self) -> float:
        """Intra-cluster weight over ordered node pairs."""
        return 2.0 * self.sum_in

    @property
    def v(self) -> float:
        """Cluster volume: summed member strengths."""
        return self.sum_tot


@dataclass(frozen=True)
class MoveContext:
    """One candidate move of an unassigned node into a target cluster."""

    partition: Partition
    node: int
    source: int
    target: int
    k_i: float
    k_i_in_source: float
    k_i_in_target: float


def modularity(p: Partition) -> float:
    """Eq-form modularity of the partition; 0.0 for an edgeless graph."""
    m = p.graph.total_weight
    if m <= 0:
        return 0.0
    inv_m = 1.0 / m
    inv_2m = 0.5 / m
    q = 0.0
    sum_tot = p.sum_tot
    for c, s_in in enumerate(p.sum_in):
        q += s_in * inv_m - (sum_tot[c] * inv_2m) ** 2
    return q


def modularity_gain(ctx: MoveContext) -> float:
    """Exact modularity delta of inserting ctx.node into ctx.target.

    The node must currently be unassigned; "before" counts it as its own
    singleton, which is where removal leaves it conceptually. Inserting
    into an empty cluster therefore has gain 0.
    """
    p = ctx.partition
    m = p.graph.total_weight
    if m <= 0:
        return 0.0
    return ctx.k_i_in_target / m - p.sum_tot[ctx.target] * ctx.k_i / (2.0 * m * m)


def _wlogv_term(w: float, v: float, big_m: float, inv_log_base: float) -> float:
    if w <= 0.0:
        return 0.0
    return -(w / big_m) * math.log(v / big_m) * inv_log_base


def wlogv(p: Partition, base: float = DEFAULT_LOG_BASE) -> float:
    """Weighted cluster-volume entropy S; higher is better."""
    m = p.graph.total_weight
    if m <= 0:
        raise EmptyGraphError("wlogv needs total weight > 0")
    big_m = 2.0 * m
    inv_log_base = 1.0 / math.log(base)
    s = 0.0
    sum_in = p.sum_in
    sum_tot = p.sum_tot
    for c in range(len(sum_in)):
        s += _wlogv_term(2.0 * sum_in[c], sum_tot[c], big_m, inv_log_base)
    return s


def wlogv_gain(ctx: MoveContext, base: float = DEFAULT_LOG_BASE) -> float:
    """Exact S delta of inserting ctx.node into ctx.target.

    Same protocol as modularity_gain: the node is unassigned and counts as
    its own singleton before the insertion. Only the target cluster's term
    and the node's singleton term change.
    """
    p = ctx.partition
    m = p.graph.total_weight
    if m <= 0:
        raise EmptyGraphError("wlogv needs total weight > 0")
    big_m = 2.0 * m
    inv_log_base = 1.0 / math.log(base)
    loop = p.graph.adjacency[ctx.node].get(ctx.node, 0.0)
    w_t = 2.0 * p.sum_in[ctx.target]
    v_t = p.sum_tot[ctx.target]
    after = _wlogv_term(w_t + 2.0 * ctx.k_i_in_target + 2.0 * loop, v_t + ctx.k_i, big_m, inv_log_base)
    before = _wlogv_term(w_t, v_t, big_m, inv_log_base)
    single = _wlogv_term(2.0 * loop, ctx.k_i, big_m, inv_log_base)
    return after - before - single
