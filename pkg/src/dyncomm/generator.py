"""Synthetic dynamic graphs with planted, slowly morphing communities.

Each predefined graph step is a set of preferential-attachment clusters
merged pairwise (queue discipline) with a handful of inter-cluster edges.
Consecutive step graphs are diffed, and the resulting edge additions and
removals are spread evenly over the intermediate time steps, with the kind
of each single change drawn uniformly while both pools last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import TextIO

from .errors import InvalidParamsError, StreamParseError
from .graph import ChangeSet, DynamicGraph, Graph, diff

GT_MAGIC = "GT"


@dataclass(frozen=True)
class GraphStepSpec:
    """Planted cluster sizes for one predefined graph step."""

    cluster_sizes: tuple[int, ...]

    def __init__(self, cluster_sizes):
        object.__setattr__(self, "cluster_sizes", tuple(cluster_sizes))

    @property
    def n_nodes(self) -> int:
        return sum(self.cluster_sizes)


@dataclass(frozen=True)
class GeneratorConfig:
    """Recipe for a dynamic graph.

    Exactly one of intermediate_steps (fixed count per morph phase) or
    changes_per_step (derive the count from the diff size) may be set;
    with neither, each phase is a single step. inter_edges is the number
    of bridging edges added per pairwise cluster merge (defaults to m).
    max_total_steps truncates the stream mid-phase once that many change
    steps were emitted.
    """

    graph_steps: tuple[GraphStepSpec, ...]
    m: int = 2
    inter_edges: int | None = None
    intermediate_steps: int | None = None
    changes_per_step: int | None = None
    max_total_steps: int | None = None
    rng_seed: int = 0

    def __init__(
        self,
        graph_steps,
        m: int = 2,
        inter_edges: int | None = None,
        intermediate_steps: int | None = None,
        changes_per_step: int | None = None,
        max_total_steps: int | None = None,
        rng_seed: int = 0,
    ):
        object.__setattr__(self, "graph_steps", tuple(graph_steps))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "inter_edges", inter_edges)
        object.__setattr__(self, "intermediate_steps", intermediate_steps)
        object.__setattr__(self, "changes_per_step", changes_per_step)
        object.__setattr__(self, "max_total_steps", max_total_steps)
        object.__setattr__(self, "rng_seed", rng_seed)


def barabasi_albert(n: int, m: int, rng: Random) -> Graph:
    """Preferential-attachment graph: m isolated seeds, then each new node
    attaches to m distinct earlier nodes with probability proportional to
    degree (degree-0 nodes get a pseudo-count of 1). Yields (n - m) * m
    edges, all weight 1."""
    if m < 1 or n <= m:
        raise InvalidParamsError(f"need n > m >= 1, got n={n}, m={m}")
    g = Graph(n)
    weights = [1] * n  # attachment weight: degree, or 1 while still isolated
    for source in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            pick = rng.choices(range(source), weights=weights[:source])[0]
            targets.add(pick)
        for t in targets:
            g.add_edge(source, t, 1.0)
            weights[t] = g.degree(t)
        weights[source] = g.degree(source)
    return g


def minimal_merge(g1: Graph, g2: Graph, k: int, rng: Random) -> Graph:
    """Disjoint union (g2 ids shifted by g1's size) plus exactly k distinct
    bridging edges, each endpoint drawn degree-proportionally within its
    side."""
    n1, n2 = g1.n_nodes, g2.n_nodes
    if k < 1:
        raise InvalidParamsError("need at least one bridging edge")
    if k > n1 * n2:
        raise InvalidParamsError(f"cannot place {k} distinct edges between {n1} and {n2} nodes")
    merged = Graph(n1 + n2)
    for u, v, w in g1.edges():
        merged.add_edge(u, v, w)
    for u, v, w in g2.edges():
        merged.add_edge(u + n1, v + n1, w)
    w1 = [max(g1.degree(i), 1) for i in range(n1)]
    w2 = [max(g2.degree(i), 1) for i in range(n2)]
    placed: set[tuple[int, int]] = set()
    while len(placed) < k:
        u = rng.choices(range(n1), weights=w1)[0]
        v = rng.choices(range(n2), weights=w2)[0] + n1
        if (u, v) not in placed:
            placed.add((u, v))
            merged.add_edge(u, v, 1.0)
    return merged


def generate_graph(cfg: GeneratorConfig, spec: GraphStepSpec, rng: Random) -> tuple[Graph, list[int]]:
    """One predefined step graph plus its planted labels.

    Builds a preferential-attachment graph per cluster size, then merges
    queue-style: pop two graphs from the front, bridge them, push the
    result to the back, until one graph remains.
    """
    if not spec.cluster_sizes:
        raise InvalidParamsError("need at least one cluster")
    k = cfg.inter_edges if cfg.inter_edges is not None else cfg.m
    queue: list[tuple[Graph, list[int]]] = []
    for idx, size in enumerate(spec.cluster_sizes):
        queue.append((barabasi_albert(size, cfg.m, rng), [idx] * size))
    while len(queue) > 1:
        (ga, la) = queue.pop(0)
        (gb, lb) = queue.pop(0)
        queue.append((minimal_merge(ga, gb, k, rng), la + lb))
    return queue[0]


def distribute_evenly(total: int, bins: int) -> list[int]:
    """Split total into `bins` integers, max - min <= 1, larger first."""
    if bins <= 0:
        raise InvalidParamsError("need at least one bin")
    if total < 0:
        raise InvalidParamsError("total must be non-negative")
    base, rem = divmod(total, bins)
    return [base + 1] * rem + [base] * (bins - rem)


def _spec_seed(seed: int, spec: GraphStepSpec) -> int:
    # stable content-keyed fold, so equal specs get equal substreams
    h = seed & 0xFFFFFFFF
    for s in spec.cluster_sizes:
        h = (h * 1000003 + s + 1) & 0xFFFFFFFFFFFFFFFF
    return h


def predefined_step_graphs(cfg: GeneratorConfig) -> list[tuple[Graph, list[int]]]:
    """The phase-boundary graphs and planted labels a config interpolates
    between. Each is drawn from a substream keyed by (seed, spec), so
    identical specs yield identical graphs regardless of position."""
    if len(cfg.graph_steps) < 2:
        raise InvalidParamsError("need at least two graph steps")
    if cfg.intermediate_steps is not None and cfg.changes_per_step is not None:
        raise InvalidParamsError("set intermediate_steps or changes_per_step, not both")
    if cfg.intermediate_steps is not None and cfg.intermediate_steps < 1:
        raise InvalidParamsError("intermediate_steps must be positive")
    if cfg.changes_per_step is not None and cfg.changes_per_step < 1:
        raise InvalidParamsError("changes_per_step must be positive")
    n_nodes = cfg.graph_steps[0].n_nodes
    for spec in cfg.graph_steps:
        if spec.n_nodes != n_nodes:
            raise InvalidParamsError("all graph steps must have the same node count")
        if any(size < cfg.m + 1 for size in spec.cluster_sizes):
            raise InvalidParamsError(f"every cluster needs more than m={cfg.m} nodes")
    return [
        generate_graph(cfg, spec, Random(_spec_seed(cfg.rng_seed, spec)))
        for spec in cfg.graph_steps
    ]


def generate_dyn_graph(cfg: GeneratorConfig) -> tuple[DynamicGraph, dict[int, list[int]]]:
    """Build the dynamic graph and the planted labels per predefined step.

    Between consecutive predefined graphs the edge diff is split evenly
    over the phase's intermediate steps; each single change picks add vs
    remove uniformly while both pools are non-empty. Returns the stream
    plus {step_index: labels} for every predefined step reached.
    """
    graphs = predefined_step_graphs(cfg)
    rng = Random(cfg.rng_seed)
    initial, labels0 = graphs[0]
    truths: dict[int, list[int]] = {0: labels0}
    steps: list[ChangeSet] = []
    cap = cfg.max_total_steps

    for phase in range(1, len(graphs)):
        prev_graph = graphs[phase - 1][0]
        next_graph, next_labels = graphs[phase]
        add_pool, remove_pool = diff(prev_graph, next_graph)
        total = len(add_pool) + len(remove_pool)
        if cfg.intermediate_steps is not None:
            n_bins = cfg.intermediate_steps
        elif cfg.changes_per_step is not None:
            n_bins = max(1, math.ceil(total / cfg.changes_per_step))
        else:
            n_bins = 1
        truncated = False
        for count in distribute_evenly(total, n_bins):
            cs = ChangeSet(len(steps) + 1)
            for _ in range(count):
                if add_pool and remove_pool:
                    pool = add_pool if rng.random() < 0.5 else remove_pool
                elif add_pool:
                    pool = add_pool
                else:
                    pool = remove_pool
                idx = rng.randrange(len(pool))
                pool[idx], pool[-1] = pool[-1], pool[idx]
                cs.changes.append(pool.pop())
            steps.append(cs)
            if cap is not None and len(steps) >= cap:
                truncated = True
                break
        if truncated:
            break
        truths[len(steps)] = next_labels
    return DynamicGraph(initial, steps), truths


def random_step_specs(
    n_nodes: int,
    n_steps: int,
    clusters_min: int,
    clusters_max: int,
    rng: Random,
) -> list[GraphStepSpec]:
    """Per step, draw a cluster count uniformly in [clusters_min,
    clusters_max] and split n_nodes as evenly as possible."""
    if n_steps < 1:
        raise InvalidParamsError("need at least one step")
    if not 1 <= clusters_min <= clusters_max:
        raise InvalidParamsError("need 1 <= clusters_min <= clusters_max")
    specs = []
    for _ in range(n_steps):
        count = rng.randint(clusters_min, clusters_max)
        specs.append(GraphStepSpec(distribute_evenly(n_nodes, count)))
    return specs


def varied_step_specs(
    n_nodes: int,
    n_steps: int,
    clusters_min: int,
    clusters_max: int,
    rng: Random,
) -> list[GraphStepSpec]:
    """Like random_step_specs, but consecutive layouts are forced to
    differ — an identical layout would reproduce the same graph and emit
    an empty morph phase."""
    if n_steps < 1:
        raise InvalidParamsError("need at least one step")
    if not 1 <= clusters_min <= clusters_max:
        raise InvalidParamsError("need 1 <= clusters_min <= clusters_max")
    specs: list[GraphStepSpec] = []
    tries = 0
    while len(specs) < n_steps:
        count = rng.randint(clusters_min, clusters_max)
        spec = GraphStepSpec(distribute_evenly(n_nodes, count))
        if specs and spec == specs[-1]:
            tries += 1
            if tries > 1000:
                raise InvalidParamsError(
                    "cluster count range too narrow to vary consecutive steps"
                )
            continue
        tries = 0
        specs.append(spec)
    return specs


# --- ground-truth sidecar -------------------------------------------------
#
# GT <step_index>
# C <node> <cluster>


def save_ground_truth(truths: dict[int, list[int]], fh: TextIO) -> None:
    for step in sorted(truths):
        fh.write(f"{GT_MAGIC} {step}\n")
        for node, cluster in enumerate(truths[step]):
            fh.write(f"C {node} {cluster}\n")


def save_ground_truth_path(truths: dict[int, list[int]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        save_ground_truth(truths, fh)


def load_ground_truth(fh: TextIO) -> dict[int, list[int]]:
    truths: dict[int, dict[int, int]] = {}
    current: dict[int, int] | None = None
    for line_no, raw in enumerate(fh.read().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == GT_MAGIC:
                current = truths.setdefault(int(parts[1]), {})
            elif parts[0] == "C":
                if current is None:
                    raise StreamParseError("C before GT", line_no)
                current[int(parts[1])] = int(parts[2])
            else:
                raise StreamParseError(f"unknown record {parts[0]!r}", line_no)
        except (IndexError, ValueError):
            raise StreamParseError("malformed ground-truth line", line_no) from None
    out: dict[int, list[int]] = {}
    for step, mapping in truths.items():
        labels = [0] * (max(mapping) + 1 if mapping else 0)
        for node, cluster in mapping.items():
            labels[node] = cluster
        out[step] = labels
    return out


def load_ground_truth_path(path: str) -> dict[int, list[int]]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_ground_truth(fh)
