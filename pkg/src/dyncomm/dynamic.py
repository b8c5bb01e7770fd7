"""Local re-clustering of an evolving graph around its changed region.

Each step applies a change set, resets every node within delete-range hops
of a changed endpoint to a fresh singleton, and re-runs the level engine
with only those nodes as first-level candidates. Later levels see the full
coarsened graph, so cluster-scale restructuring stays possible while the
expensive first level stays local.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from collections import deque

from .engine import Dendrogram, SweepConfig, run_levels
from .errors import EmptyGraphError, InvalidParamsError
from .graph import ChangeSet, Graph, apply_changes
from .objectives import Partition, modularity, wlogv

# Delete range: hop radius around changed endpoints; UNBOUNDED resets all.
DeleteRange = float
UNBOUNDED: DeleteRange = math.inf


def frontier(g: Graph, cs: ChangeSet, r: DeleteRange) -> set[int]:
    """Nodes within r hops (in g, post-change) of any changed endpoint.

    Endpoints of deleted edges count as seeds even though the edge is gone.
    r = 0 returns just the seeds; r = UNBOUNDED returns every node of g,
    connected to a seed or not.
    """
    if r < 0:
        raise InvalidParamsError("delete range must be non-negative")
    if math.isinf(r):
        return set(range(g.n_nodes))
    seeds = cs.nodes()
    for s in seeds:
        if not 0 <= s < g.n_nodes:
            raise InvalidParamsError(f"change endpoint {s} outside graph")
    visited = set(seeds)
    queue = deque((s, 0) for s in sorted(seeds))
    adj = g.adjacency
    while queue:
        node, dist = queue.popleft()
        if dist >= r:
            continue
        for j in adj[node]:
            if j not in visited:
                visited.add(j)
                queue.append((j, dist + 1))
    return visited


def reset_partition(g: Graph, prev: list[int], nodes: set[int]) -> Partition:
    """Partition keeping prev labels except on `nodes`, which become fresh
    singletons.

    Fresh ids start past the largest kept id and are handed out in node
    order, so resetting every node reproduces the singleton partition with
    cluster id == node id.
    """
    if len(prev) != g.n_nodes:
        raise InvalidParamsError("previous assignment length must match node count")
    assignment = list(prev)
    next_id = max((prev[i] for i in range(g.n_nodes) if i not in nodes), default=-1) + 1
    for i in range(g.n_nodes):
        if i in nodes:
            assignment[i] = next_id
            next_id += 1
    return Partition(g, assignment)


def noise_filter(labels: list[int], min_cluster_size: int = 2) -> list[int]:
    """Merge every cluster smaller than min_cluster_size into one noise
    cluster (id = max label + 1). The noise cluster is an ordinary cluster
    for all downstream metrics."""
    if min_cluster_size <= 1 or not labels:
        return list(labels)
    counts: dict[int, int] = {}
    for c in labels:
        counts[c] = counts.get(c, 0) + 1
    small = {c for c, n in counts.items() if n < min_cluster_size}
    if not small:
        return list(labels)
    noise_id = max(labels) + 1
    return [noise_id if c in small else c for c in labels]


@dataclass(frozen=True)
class StepMetrics:
    """What one dynamic (or static) step measured and produced."""

    time_s: float
    modularity: float
    wlogv: float
    clusters: int
    frontier_size: int


@dataclass
class DynamicState:
    """Carry-over between steps: the graph and the raw (pre-noise-filter)
    flattened partition that seeds the next step."""

    graph: Graph
    assignment: list[int]
    step_index: int = 0
    metrics: StepMetrics | None = None


def evaluate(g: Graph, labels: list[int]) -> tuple[float, float, int]:
    """(modularity, wlogv, cluster count) of a labeling; S is 0 when the
    graph has no edges."""
    p = Partition(g, labels)
    q = modularity(p)
    s = wlogv(p) if g.total_weight > 0 else 0.0
    return q, s, p.n_clusters()


def dynamic_cluster(
    g: Graph,
    prev: list[int],
    cs: ChangeSet,
    r: DeleteRange,
    cfg: SweepConfig,
) -> tuple[Dendrogram, set[int]]:
    """Re-cluster g (already post-change) locally around cs.

    Returns the dendrogram and the frontier that was reset. With
    r = UNBOUNDED this reduces exactly to a static run: all nodes reset to
    singletons and all are level-1 candidates.
    """
    if g.n_nodes == 0:
        raise EmptyGraphError("cannot cluster an empty graph")
    front = frontier(g, cs, r)
    p0 = reset_partition(g, prev, front)
    dendro = run_levels(g, p0, sorted(front), cfg)
    return dendro, front


def run_dynamic_step(
    state: DynamicState,
    cs: ChangeSet,
    r: DeleteRange,
    cfg: SweepConfig,
    min_cluster_size: int = 2,
) -> tuple[Dendrogram, DynamicState]:
    """Apply cs to the state's graph and re-cluster locally.

    The returned state carries the raw flattened partition (the next step's
    seed); metrics are computed on the noise-filtered labeling. The input
    state is not modified, so a step can be re-run from the same state.
    """
    g = apply_changes(state.graph, cs)
    t0 = time.perf_counter()
    dendro, front = dynamic_cluster(g, state.assignment, cs, r, cfg)
    elapsed = time.perf_counter() - t0
    raw = dendro.final_partition
    q, s, n_clusters = evaluate(g, noise_filter(raw, min_cluster_size))
    metrics = StepMetrics(elapsed, q, s, n_clusters, len(front))
    return dendro, DynamicState(g, raw, state.step_index + 1, metrics)
