"""Temporal multigraph model: ingestion, normalization, projection, synthesis.

A temporal graph is an undirected multigraph whose edges carry integer
timestamps.  Parallel edges between the same endpoints are meaningful and
kept; self-loops are dropped at ingestion because degree counts distinct
neighbors and a loop never contributes one.
"""

from __future__ import annotations

import gzip
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple


class ContractViolation(ValueError):
    """An operation was called outside its stated precondition."""


class TimeInterval(NamedTuple):
    """Closed integer interval [ts, te]."""

    ts: int
    te: int

    def contains(self, other: "TimeInterval") -> bool:
        return self.ts <= other.ts and other.te <= self.te

    def covers(self, t: int) -> bool:
        return self.ts <= t <= self.te

    @property
    def span(self) -> int:
        return self.te - self.ts

    @property
    def duration(self) -> int:
        """Number of integer timestamps covered, inclusive of both ends."""
        return self.te - self.ts + 1


class TemporalEdge(NamedTuple):
    """Undirected timestamped edge, stored with u <= v."""

    u: int
    v: int
    t: int


def make_edge(a: int, b: int, t: int) -> TemporalEdge:
    return TemporalEdge(a, b, t) if a <= b else TemporalEdge(b, a, t)


def _edge_order(e: TemporalEdge):
    return (e.t, e.u, e.v)


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class TemporalGraph:
    """Immutable temporal multigraph with dense vertex ids 0..vertex_count-1.

    `edges` is the canonical multiset: endpoint-ordered and sorted by
    (t, u, v).  `labels[i]` is the external label of vertex i.
    """

    vertex_count: int
    edges: tuple[TemporalEdge, ...]
    labels: tuple[str, ...]
    self_loops_dropped: int = 0

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, int]],
        labels: Iterable[str] | None = None,
        self_loops_dropped: int = 0,
    ) -> "TemporalGraph":
        canon = []
        for u, v, t in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v},{t}) outside vertex range")
            canon.append(make_edge(int(u), int(v), int(t)))
        canon.sort(key=_edge_order)
        if labels is None:
            label_tuple = tuple(str(i) for i in range(vertex_count))
        else:
            label_tuple = tuple(labels)
            if len(label_tuple) != vertex_count:
                raise ValueError("label count must equal vertex count")
        return cls(vertex_count, tuple(canon), label_tuple, self_loops_dropped)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def min_t(self):
        return self.edges[0].t if self.edges else None

    @cached_property
    def max_t(self):
        return self.edges[-1].t if self.edges else None

    @cached_property
    def _label_to_id(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def id_of(self, label: str) -> int:
        return self._label_to_id[label]

    def label_of(self, vertex: int) -> str:
        return self.labels[vertex]

    def time_range(self) -> TimeInterval | None:
        if not self.edges:
            return None
        return TimeInterval(self.min_t, self.max_t)


@dataclass(frozen=True)
class CoreSnapshot:
    """Frozen copy of a core: surviving vertices, edge multiset, and the
    [min, max] surviving timestamp pair (None when empty).

    `k` records which degree bound produced the snapshot; it is metadata and
    excluded from equality so cores compare by content alone.
    """

    vertices: frozenset
    edges: tuple[TemporalEdge, ...]
    tti: TimeInterval | None
    k: int | None = None

    def __eq__(self, other):
        if not isinstance(other, CoreSnapshot):
            return NotImplemented
        return self.edges == other.edges and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.vertices, self.edges))

    @property
    def is_empty(self) -> bool:
        return not self.edges

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbor_sets(self) -> dict:
        out: dict = {v: set() for v in self.vertices}
        for u, v, _ in self.edges:
            out[u].add(v)
            out[v].add(u)
        return {v: frozenset(s) for v, s in out.items()}

    @cached_property
    def pair_counts(self) -> Counter:
        """Parallel-edge count per adjacent vertex pair."""
        return Counter((u, v) for u, v, _ in self.edges)

    def neighbors(self, v) -> frozenset:
        return self.neighbor_sets[v]


EMPTY_SNAPSHOT = CoreSnapshot(frozenset(), (), None)


def project(g: TemporalGraph, window) -> TemporalGraph:
    """Restrict the edge multiset to timestamps inside `window`.

    The vertex universe is unchanged: projection never renames or drops
    vertices, only edges.
    """
    w = TimeInterval(*window)
    kept = tuple(e for e in g.edges if w.ts <= e.t <= w.te)
    return TemporalGraph(g.vertex_count, kept, g.labels)


def parse_edge_list(lines: Iterable[str], *, comment_prefix: str = "#") -> TemporalGraph:
    """Parse whitespace-separated `src dst timestamp` lines.

    Extra trailing fields are ignored, `comment_prefix` lines and blank
    lines are skipped, labels are assigned dense ids in order of first
    appearance, and self-loops are dropped but tallied on the result.
    """
    label_ids: dict = {}
    labels: list = []
    edges = []
    loops = 0
    saw_data = False
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefix):
            continue
        parts = line.split()
        if len(parts) < 3:
            raise ParseError(line_no, f"expected 'src dst timestamp', got {line!r}")
        try:
            t = int(parts[2])
        except ValueError:
            raise ParseError(line_no, f"timestamp is not an integer: {parts[2]!r}") from None
        saw_data = True
        ids = []
        for lab in parts[:2]:
            if lab not in label_ids:
                label_ids[lab] = len(labels)
                labels.append(lab)
            ids.append(label_ids[lab])
        if ids[0] == ids[1]:
            loops += 1
            continue
        edges.append(make_edge(ids[0], ids[1], t))
    if not saw_data:
        raise ParseError(0, "no edges in input")
    edges.sort(key=_edge_order)
    return TemporalGraph(len(labels), tuple(edges), tuple(labels), loops)


def load_edge_list(path) -> TemporalGraph:
    """Read an edge list from `path`; '.gz' files are decompressed."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as fh:
        return parse_edge_list(fh)


def normalize_timestamps(g: TemporalGraph, mode: str, width: int | None = None) -> TemporalGraph:
    """Map raw timestamps onto small positive integers.

    bucket: t' = (t - min_t) // width + 1, so each bucket covers `width`
    raw units.  rank: distinct timestamps become 1..m in ascending order,
    which is idempotent.
    """
    if g.edge_count == 0:
        raise ValueError("cannot normalize a graph with no edges")
    if mode == "bucket":
        if width is None or width <= 0:
            raise ValueError("bucket width must be a positive integer")
        lo = g.min_t

        def remap(t):
            return (t - lo) // width + 1

    elif mode == "rank":
        ranks = {t: i for i, t in enumerate(sorted({e.t for e in g.edges}), start=1)}
        remap = ranks.__getitem__
    else:
        raise ValueError(f"unknown normalization mode: {mode!r}")
    edges = tuple(TemporalEdge(e.u, e.v, remap(e.t)) for e in g.edges)
    return TemporalGraph(g.vertex_count, edges, g.labels, g.self_loops_dropped)


def generate_synthetic(
    n_vertices: int, n_edges: int, n_timestamps: int, model: str, seed: int
) -> TemporalGraph:
    """Deterministically generate a temporal multigraph.

    Models: `uniform` picks endpoint pairs and timestamps uniformly;
    `preferential` biases one endpoint toward already-busy vertices;
    `planted-community` embeds dense vertex groups that are only active in
    short random sub-windows, so k-cores exist in specific subintervals
    against a sparse background.
    """
    if n_vertices < 2:
        raise ValueError("need at least two vertices")
    if n_edges < 1 or n_timestamps < 1:
        raise ValueError("edge and timestamp counts must be positive")
    rng = random.Random(seed)

    def distinct_pair():
        u = rng.randrange(n_vertices)
        v = rng.randrange(n_vertices - 1)
        if v >= u:
            v += 1
        return u, v

    edges: list[tuple[int, int, int]] = []
    if model == "uniform":
        for _ in range(n_edges):
            u, v = distinct_pair()
            edges.append((u, v, rng.randint(1, n_timestamps)))
    elif model == "preferential":
        endpoints: list[int] = []
        for _ in range(n_edges):
            u = rng.randrange(n_vertices)
            if endpoints and rng.random() < 0.8:
                v = rng.choice(endpoints)
            else:
                v = rng.randrange(n_vertices)
            if v == u:
                v = (u + 1 + rng.randrange(n_vertices - 1)) % n_vertices
            edges.append((u, v, rng.randint(1, n_timestamps)))
            endpoints.extend((u, v))
    elif model == "planted-community":
        ids = list(range(n_vertices))
        rng.shuffle(ids)
        width = 2 if n_timestamps >= 2 else 1
        communities = []
        cursor = 0
        target = max(1, n_vertices // 350)
        for _ in range(target):
            size = min(n_vertices - cursor, max(4, rng.randint(12, 28)))
            if size < 4:
                break
            members = ids[cursor : cursor + size]
            cursor += size
            a = rng.randint(1, max(1, n_timestamps - width + 1))
            b = min(n_timestamps, a + width - 1)
            communities.append((members, a, b))
        planted = round(n_edges * 0.94) if communities else 0
        for j in range(n_edges):
            if j < planted:
                members, a, b = communities[j % len(communities)]
                u, v = rng.sample(members, 2)
                edges.append((u, v, rng.randint(a, b)))
            else:
                u, v = distinct_pair()
                edges.append((u, v, rng.randint(1, n_timestamps)))
    else:
        raise ValueError(f"unknown synthetic model: {model!r}")
    return TemporalGraph.from_edges(n_vertices, edges)
