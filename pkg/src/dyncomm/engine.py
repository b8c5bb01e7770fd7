"""Greedy agglomerative optimization: local move sweeps plus coarsening.

one_level repeatedly sweeps a candidate node list in seeded random order,
applying for each node the best strictly-improving cluster move. Stable
levels are coarsened into supernode graphs (clusters become nodes, intra
weight becomes a self-loop) until no level improves or coarsening stops
shrinking the graph.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EmptyGraphError
from .graph import Graph
from .objectives import DEFAULT_LOG_BASE, Partition


class Objective(enum.Enum):
    MODULARITY = "modularity"
    WLOGV = "wlogv"


@dataclass(frozen=True)
class SweepConfig:
    """Knobs for one optimization run.

    min_gain is the strict threshold a move's net improvement (over
    staying) must exceed; max_sweeps caps passes per level as a float-noise
    safety net.
    """

    objective: Objective = Objective.MODULARITY
    rng_seed: int = 0
    min_gain: float = 0.0
    max_sweeps: int = 100


@dataclass
class Level:
    """One dendrogram level: the graph it ran on and what it produced."""

    graph: Graph
    partition: Partition
    induced: Graph
    cluster_to_super: dict[int, int]


@dataclass
class Dendrogram:
    levels: list[Level] = field(default_factory=list)
    final_partition: list[int] = field(default_factory=list)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dendrogram):
            return NotImplemented
        if len(self.levels) != len(other.levels) or self.final_partition != other.final_partition:
            return False
        for a, b in zip(self.levels, other.levels):
            if (
                a.partition.assignment != b.partition.assignment
                or a.graph != b.graph
                or a.induced != b.induced
                or a.cluster_to_super != b.cluster_to_super
            ):
                return False
        return True


def one_level(
    g: Graph,
    p: Partition,
    candidates: Iterable[int],
    cfg: SweepConfig,
    rng: random.Random | None = None,
) -> tuple[Partition, bool]:
    """Sweep candidates until a full pass moves no node.

    Candidates are visited in a freshly shuffled order each sweep; only
    they may move, but gains see the whole partition. Ties between equally
    good targets go to the lowest cluster id. Returns (p, moved_any);
    p is modified in place.
    """
    if rng is None:
        rng = random.Random(cfg.rng_seed)
    order = sorted(candidates)
    m = g.total_weight
    if m <= 0 or not order:
        return p, False

    adj = g.adjacency
    assignment = p.assignment
    sum_in = p.sum_in
    sum_tot = p.sum_tot
    sizes = p.sizes
    strengths = p.strengths
    use_mod = cfg.objective is Objective.MODULARITY
    min_gain = cfg.min_gain
    inv_m = 1.0 / m
    inv_2m2 = 1.0 / (2.0 * m * m)
    big_m = 2.0 * m
    log = math.log
    inv_log_base = 1.0 / log(DEFAULT_LOG_BASE)

    def term(w: float, v: float) -> float:
        if w <= 0.0:
            return 0.0
        return -(w / big_m) * log(v / big_m) * inv_log_base

    improved = False
    for _ in range(cfg.max_sweeps):
        rng.shuffle(order)
        moves = 0
        for node in order:
            com = assignment[node]
            k_i = strengths[node]
            nbrs = adj[node]
            loop = nbrs.get(node, 0.0)
            nbw: dict[int, float] = {}
            for j, w in nbrs.items():
                if j != node:
                    c2 = assignment[j]
                    nbw[c2] = nbw.get(c2, 0.0) + w
            k_in_src = nbw.get(com, 0.0)

            sum_in[com] -= k_in_src + loop
            sum_tot[com] -= k_i
            sizes[com] -= 1

            if use_mod:
                scale = k_i * inv_2m2
                stay = k_in_src * inv_m - sum_tot[com] * scale
                best_c = com
                best_gain = stay
                for c2, k_in in nbw.items():
                    if c2 == com:
                        continue
                    gain = k_in * inv_m - sum_tot[c2] * scale
                    if gain > best_gain or (gain == best_gain and c2 < best_c):
                        best_c = c2
                        best_gain = gain
            else:
                loop2 = 2.0 * loop
                w_src = 2.0 * sum_in[com]
                stay = term(w_src + 2.0 * k_in_src + loop2, sum_tot[com] + k_i) - term(w_src, sum_tot[com])
                best_c = com
                best_gain = stay
                for c2, k_in in nbw.items():
                    if c2 == com:
                        continue
                    w_t = 2.0 * sum_in[c2]
                    v_t = sum_tot[c2]
                    gain = term(w_t + 2.0 * k_in + loop2, v_t + k_i) - term(w_t, v_t)
                    if gain > best_gain or (gain == best_gain and c2 < best_c):
                        best_c = c2
                        best_gain = gain

            if best_c != com and best_gain - stay > min_gain:
                target = best_c
                k_in_t = nbw.get(target, 0.0)
                moves += 1
            else:
                target = com
                k_in_t = k_in_src
            sum_in[target] += k_in_t + loop
            sum_tot[target] += k_i
            sizes[target] += 1
            assignment[node] = target
        if moves:
            improved = True
        else:
            break
    return p, improved


def induced_graph(g: Graph, p: Partition) -> tuple[Graph, dict[int, int]]:
    """Coarsen g by p: one supernode per non-empty cluster.

    Intra-cluster weight becomes the supernode's self-loop, so total weight
    is preserved. Supernode ids follow first appearance in node order.
    Returns (coarse graph, cluster id -> supernode id).
    """
    assignment = p.assignment
    mapping: dict[int, int] = {}
    for c in assignment:
        if c not in mapping:
            mapping[c] = len(mapping)
    coarse = Graph(len(mapping))
    acc: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges():
        cu = mapping[assignment[u]]
        cv = mapping[assignment[v]]
        key = (cu, cv) if cu <= cv else (cv, cu)
        acc[key] = acc.get(key, 0.0) + w
    for (cu, cv), w in acc.items():
        coarse.add_edge(cu, cv, w)
    return coarse, mapping


def flatten(levels: Sequence[Level]) -> list[int]:
    """Compose level assignments down to original nodes.

    Output labels are relabeled to 0..k-1 in order of first appearance by
    node id.
    """
    if not levels:
        return []
    labels = list(levels[0].partition.assignment)
    for depth in range(1, len(levels)):
        prev_map = levels[depth - 1].cluster_to_super
        nxt = levels[depth].partition.assignment
        labels = [nxt[prev_map[c]] for c in labels]
    relabel: dict[int, int] = {}
    out = []
    for c in labels:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return out


def run_levels(
    g: Graph,
    p: Partition,
    first_candidates: Iterable[int],
    cfg: SweepConfig,
) -> Dendrogram:
    """Level loop shared by the static and dynamic entry points.

    The first level sweeps only first_candidates; every later level sweeps
    all supernodes of its coarsened graph. Stops when a level makes no
    move or coarsening no longer shrinks the graph.
    """
    rng = random.Random(cfg.rng_seed)
    levels: list[Level] = []
    cur = g
    part = p
    candidates: Iterable[int] = first_candidates
    while True:
        part, improved = one_level(cur, part, candidates, cfg, rng)
        coarse, mapping = induced_graph(cur, part)
        levels.append(Level(cur, part, coarse, mapping))
        if not improved or coarse.n_nodes == cur.n_nodes:
            break
        cur = coarse
        part = Partition.singletons(coarse)
        candidates = range(coarse.n_nodes)
    return Dendrogram(levels, flatten(levels))


def run_static(g: Graph, cfg: SweepConfig) -> Dendrogram:
    """Full run from singletons with every node as a level-1 candidate."""
    if g.n_nodes == 0:
        raise EmptyGraphError("cannot cluster an empty graph")
    return run_levels(g, Partition.singletons(g), range(g.n_nodes), cfg)
