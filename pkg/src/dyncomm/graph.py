"""Weighted undirected graphs and the edge-change streams that evolve them.

Node ids are dense non-negative integers, so adjacency is an array of
per-node weight maps. A graph is treated as an immutable snapshot once a
step is built; changes produce the next step's graph via apply_changes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, TextIO

from .errors import (
    DuplicateEdgeError,
    MissingEdgeError,
    StreamParseError,
    UnknownNodeError,
    VersionMismatchError,
)

STREAM_MAGIC = "DYNGRAPH"
STREAM_VERSION = 1


class Graph:
    """Undirected weighted graph over nodes 0..n-1.

    Self-loops are stored once in the adjacency map; strength counts them
    twice so that the sum of all strengths equals 2m.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, n_nodes: int):
        if n_nodes < 0:
            raise ValueError("node count must be non-negative")
        self._adj: list[dict[int, float]] = [{} for _ in range(n_nodes)]
        self._m = 0.0

    @property
    def n_nodes(self) -> int:
        return len(self._adj)

    @property
    def total_weight(self) -> float:
        """Sum of edge weights, each undirected edge (and loop) counted once."""
        return self._m

    @property
    def adjacency(self) -> list[dict[int, float]]:
        return self._adj

    def _check_node(self, i: int) -> None:
        if not 0 <= i < len(self._adj):
            raise UnknownNodeError(f"node {i} not in graph of {len(self._adj)} nodes")

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self._adj[u]

    def weight(self, u: int, v: int) -> float:
        self._check_node(u)
        self._check_node(v)
        return self._adj[u].get(v, 0.0)

    def add_edge(self, u: int, v: int, w: float) -> None:
        self._check_node(u)
        self._check_node(v)
        if v in self._adj[u]:
            raise DuplicateEdgeError(f"edge ({u}, {v}) already present")
        self._adj[u][v] = w
        if u != v:
            self._adj[v][u] = w
        self._m += w

    def remove_edge(self, u: int, v: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if v not in self._adj[u]:
            raise MissingEdgeError(f"edge ({u}, {v}) not present")
        w = self._adj[u].pop(v)
        if u != v:
            del self._adj[v][u]
        self._m -= w

    def set_weight(self, u: int, v: int, w: float) -> None:
        self._check_node(u)
        self._check_node(v)
        if v not in self._adj[u]:
            raise MissingEdgeError(f"edge ({u}, {v}) not present")
        self._m += w - self._adj[u][v]
        self._adj[u][v] = w
        if u != v:
            self._adj[v][u] = w

    def neighbors(self, i: int) -> Iterator[int]:
        self._check_node(i)
        return iter(self._adj[i])

    def degree(self, i: int) -> int:
        self._check_node(i)
        return len(self._adj[i])

    def strength(self, i: int) -> float:
        """Weighted degree; a self-loop contributes twice its weight."""
        self._check_node(i)
        nbrs = self._adj[i]
        return sum(nbrs.values()) + nbrs.get(i, 0.0)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield each edge once as (u, v, w) with u <= v."""
        for u, nbrs in enumerate(self._adj):
            for v, w in nbrs.items():
                if u <= v:
                    yield u, v, w

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    def copy(self) -> "Graph":
        g = Graph(0)
        g._adj = [dict(nbrs) for nbrs in self._adj]
        g._m = self._m
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n_nodes={self.n_nodes}, edges={self.edge_count()}, m={self._m:g})"


def graph_from_edges(n_nodes: int, edges: list[tuple[int, int, float]]) -> Graph:
    """Build a graph from (u, v, w) triples."""
    g = Graph(n_nodes)
    for u, v, w in edges:
        g.add_edge(u, v, w)
    return g


class ChangeKind(enum.Enum):
    ADD = "add"
    REMOVE = "remove"
    REWEIGHT = "reweight"


@dataclass(frozen=True)
class EdgeChange:
    """One edge-level event. weight is None only for removals."""

    kind: ChangeKind
    u: int
    v: int
    weight: float | None = None

    def endpoints(self) -> tuple[int, int]:
        return self.u, self.v


def add(u: int, v: int, w: float = 1.0) -> EdgeChange:
    return EdgeChange(ChangeKind.ADD, u, v, w)


def remove(u: int, v: int) -> EdgeChange:
    return EdgeChange(ChangeKind.REMOVE, u, v)


def reweight(u: int, v: int, w: float) -> EdgeChange:
    return EdgeChange(ChangeKind.REWEIGHT, u, v, w)


@dataclass
class ChangeSet:
    """Changes applied together as one time step."""

    step_index: int
    changes: list[EdgeChange] = field(default_factory=list)

    def nodes(self) -> set[int]:
        """Endpoints touched by any change, deleted edges included."""
        out: set[int] = set()
        for ch in self.changes:
            out.add(ch.u)
            out.add(ch.v)
        return out


@dataclass
class DynamicGraph:
    """An initial graph plus the ordered change sets that evolve it."""

    initial: Graph
    steps: list[ChangeSet] = field(default_factory=list)

    def replay(self) -> Iterator[tuple[int, Graph]]:
        """Yield (step_index, graph) snapshots, starting with (0, initial)."""
        g = self.initial
        yield 0, g
        for cs in self.steps:
            g = apply_changes(g, cs)
            yield cs.step_index, g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DynamicGraph):
            return NotImplemented
        return self.initial == other.initial and self.steps == other.steps


def apply_changes(g: Graph, cs: ChangeSet) -> Graph:
    """Return a new graph with cs applied in order; g is untouched.

    Raises DuplicateEdgeError when adding a present edge and
    MissingEdgeError when removing or reweighting an absent one.
    """
    out = g.copy()
    for ch in cs.changes:
        if ch.kind is ChangeKind.ADD:
            out.add_edge(ch.u, ch.v, ch.weight if ch.weight is not None else 1.0)
        elif ch.kind is ChangeKind.REMOVE:
            out.remove_edge(ch.u, ch.v)
        else:
            if ch.weight is None:
                raise ValueError("reweight change needs a weight")
            out.set_weight(ch.u, ch.v, ch.weight)
    return out


def diff(a: Graph, b: Graph) -> tuple[list[EdgeChange], list[EdgeChange]]:
    """Edge changes that turn a into b, as (adds, removes).

    Removals cover edges only in a; adds cover edges only in b. An edge
    present in both with a different weight is emitted as a reweight entry
    in the adds list, so applying removes then adds yields b exactly.
    Both lists are sorted by (u, v) with u < v (loops by (u, u)).
    """
    if a.n_nodes != b.n_nodes:
        raise UnknownNodeError("diff needs graphs over the same node set")
    adds: list[EdgeChange] = []
    removes: list[EdgeChange] = []
    for u, v, w in a.edges():
        if not b.has_edge(u, v):
            removes.append(remove(u, v))
    for u, v, w in b.edges():
        if not a.has_edge(u, v):
            adds.append(add(u, v, w))
        elif a.weight(u, v) != w:
            adds.append(reweight(u, v, w))
    key = lambda ch: (ch.u, ch.v)
    return sorted(adds, key=key), sorted(removes, key=key)


# --- stream file format -------------------------------------------------
#
# DYNGRAPH 1
# N <node_count>
# E <u> <v> <w>        initial edges
# T <step_index>       starts a change set
# + <u> <v> <w>
# - <u> <v>
# ~ <u> <v> <w>
# '#' starts a comment line; blank lines are ignored.


def save_stream(dg: DynamicGraph, fh: TextIO) -> None:
    """Write the stream format; initial edges sorted by (u, v)."""
    fh.write(f"{STREAM_MAGIC} {STREAM_VERSION}\n")
    fh.write(f"N {dg.initial.n_nodes}\n")
    for u, v, w in sorted(dg.initial.edges()):
        fh.write(f"E {u} {v} {w!r}\n")
    for cs in dg.steps:
        fh.write(f"T {cs.step_index}\n")
        for ch in cs.changes:
            if ch.kind is ChangeKind.ADD:
                fh.write(f"+ {ch.u} {ch.v} {ch.weight!r}\n")
            elif ch.kind is ChangeKind.REMOVE:
                fh.write(f"- {ch.u} {ch.v}\n")
            else:
                fh.write(f"~ {ch.u} {ch.v} {ch.weight!r}\n")


def save_stream_path(dg: DynamicGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        save_stream(dg, fh)


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise StreamParseError(f"bad {what} {token!r}", line_no) from None


def _parse_weight(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise StreamParseError(f"bad weight {token!r}", line_no) from None


def load_stream(fh: TextIO) -> DynamicGraph:
    """Parse the stream format; errors carry the offending line number."""
    lines = fh.read().splitlines()
    if not lines:
        raise StreamParseError("empty stream", 1)
    header = lines[0].split()
    if len(header) != 2 or header[0] != STREAM_MAGIC:
        raise StreamParseError(f"expected '{STREAM_MAGIC} <version>' header", 1)
    if _parse_int(header[1], 1, "version") != STREAM_VERSION:
        raise VersionMismatchError(f"unsupported stream version {header[1]}")

    graph: Graph | None = None
    steps: list[ChangeSet] = []
    current: ChangeSet | None = None
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "N":
                if graph is not None:
                    raise StreamParseError("duplicate N line", line_no)
                graph = Graph(_parse_int(parts[1], line_no, "node count"))
            elif tag == "E":
                if graph is None:
                    raise StreamParseError("E before N", line_no)
                if current is not None:
                    raise StreamParseError("E after first T", line_no)
                u = _parse_int(parts[1], line_no, "node")
                v = _parse_int(parts[2], line_no, "node")
                graph.add_edge(u, v, _parse_weight(parts[3], line_no))
            elif tag == "T":
                if graph is None:
                    raise StreamParseError("T before N", line_no)
                current = ChangeSet(_parse_int(parts[1], line_no, "step index"))
                steps.append(current)
            elif tag in ("+", "-", "~"):
                if current is None:
                    raise StreamParseError(f"'{tag}' before first T", line_no)
                u = _parse_int(parts[1], line_no, "node")
                v = _parse_int(parts[2], line_no, "node")
                if tag == "+":
                    current.changes.append(add(u, v, _parse_weight(parts[3], line_no)))
                elif tag == "-":
                    if len(parts) != 3:
                        raise StreamParseError("remove takes two node ids", line_no)
                    current.changes.append(remove(u, v))
                else:
                    current.changes.append(reweight(u, v, _parse_weight(parts[3], line_no)))
            else:
                raise StreamParseError(f"unknown record {tag!r}", line_no)
        except IndexError:
            raise StreamParseError("too few fields", line_no) from None
        except (UnknownNodeError, DuplicateEdgeError) as exc:
            raise StreamParseError(str(exc), line_no) from None
    if graph is None:
        raise StreamParseError("stream has no N line", len(lines))
    return DynamicGraph(graph, steps)


def load_stream_path(path: str) -> DynamicGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_stream(fh)
