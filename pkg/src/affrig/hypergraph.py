"""Combinatorial structures: graphs, hypergraphs, and graph-theoretic predicates.

Vertices are dense integer indices ``0..vertex_count-1``; any external labels
belong to the file layer. All types are immutable after construction and all
operations are pure.
"""

from __future__ import annotations

import itertools
import logging
import operator
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import InvalidInputError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def _as_vertex(u, vertex_count: int) -> int:
    try:
        v = operator.index(u)
    except TypeError:
        raise InvalidInputError(f"vertex {u!r} is not an integer") from None
    if not 0 <= v < vertex_count:
        raise InvalidInputError(f"vertex {v} out of range [0, {vertex_count})")
    return v


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..vertex_count-1``.

    Edges are stored as a frozenset of sorted pairs; no self-loops.
    """

    vertex_count: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidInputError("vertex_count must be positive")
        for e in self.edges:
            u, w = e
            _as_vertex(u, self.vertex_count)
            _as_vertex(w, self.vertex_count)
            if u == w:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if u > w:
                raise InvalidInputError(f"edge {e} not in canonical (u < w) order")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Iterable[int]]) -> Graph:
        """Build a graph, normalizing edge order and dropping duplicates."""
        canonical = set()
        for e in edges:
            u, w = (_as_vertex(x, vertex_count) for x in e)
            if u == w:
                raise InvalidInputError(f"self-loop at vertex {u}")
            canonical.add((min(u, w), max(u, w)))
        return cls(vertex_count, frozenset(canonical))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, w in self.edges:
            nbrs[u].append(w)
            nbrs[w].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, w: int) -> bool:
        return (min(u, w), max(u, w)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class Hypergraph:
    """Hypergraph on vertices ``0..vertex_count-1`` with an ordered hyperedge list."""

    vertex_count: int
    hyperedges: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidInputError("vertex_count must be positive")
        for h in self.hyperedges:
            if len(h) == 0:
                raise InvalidInputError("empty hyperedge")
            for u in h:
                _as_vertex(u, self.vertex_count)

    @classmethod
    def from_hyperedges(
        cls, vertex_count: int, hyperedges: Iterable[Iterable[int]]
    ) -> Hypergraph:
        """Build a hypergraph, deduplicating members and repeated hyperedges.

        Deduplication is logged rather than treated as an error; it does not
        change any rigidity semantics.
        """
        seen: set[frozenset[int]] = set()
        kept: list[frozenset[int]] = []
        dropped = 0
        for raw in hyperedges:
            members = [_as_vertex(u, vertex_count) for u in raw]
            h = frozenset(members)
            if len(h) < len(members):
                logger.debug("dropping repeated vertices inside hyperedge %s", members)
            if h in seen:
                dropped += 1
                continue
            seen.add(h)
            kept.append(h)
        if dropped:
            logger.info("normalization removed %d duplicate hyperedges", dropped)
        return cls(vertex_count, tuple(kept))

    def sorted_hyperedges(self) -> list[list[int]]:
        return [sorted(h) for h in self.hyperedges]


def as_hypergraph(structure: Graph | Hypergraph) -> Hypergraph:
    """View a graph as its 2-hypergraph; hypergraphs pass through unchanged."""
    if isinstance(structure, Hypergraph):
        return structure
    return Hypergraph(
        structure.vertex_count,
        tuple(frozenset(e) for e in structure.sorted_edges()),
    )


def body_graph(theta: Hypergraph) -> Graph:
    """Graph with an edge for every pair of vertices sharing a hyperedge."""
    edges = set()
    for h in theta.hyperedges:
        for u, w in itertools.combinations(sorted(h), 2):
            edges.add((u, w))
    return Graph(theta.vertex_count, frozenset(edges))


def neighborhood_hypergraph(gamma: Graph) -> Hypergraph:
    """One hyperedge per vertex: the vertex together with its neighbors."""
    hyperedges = tuple(
        frozenset((v,) + gamma.neighbors(v)) for v in range(gamma.vertex_count)
    )
    return Hypergraph(gamma.vertex_count, hyperedges)


def squared_graph(gamma: Graph) -> Graph:
    """The input graph plus an edge between any two vertices sharing a neighbor."""
    edges = set(gamma.edges)
    for v in range(gamma.vertex_count):
        for u, w in itertools.combinations(gamma.neighbors(v), 2):
            edges.add((u, w))
    return Graph(gamma.vertex_count, frozenset(edges))


def truncate_hyperedges(theta: Hypergraph, k: int) -> Hypergraph:
    """All distinct k-subsets contained in at least one hyperedge.

    Hyperedges with fewer than k vertices contribute nothing.
    """
    if k < 1:
        raise InvalidInputError("k must be positive")
    seen: set[frozenset[int]] = set()
    kept: list[frozenset[int]] = []
    for h in theta.hyperedges:
        for sub in itertools.combinations(sorted(h), k):
            s = frozenset(sub)
            if s not in seen:
                seen.add(s)
                kept.append(s)
    return Hypergraph(theta.vertex_count, tuple(kept))


class _Dinic:
    """Unit-capacity max-flow, enough for vertex-disjoint path counting."""

    def __init__(self, node_count: int):
        self.n = node_count
        self.head: list[list[int]] = [[] for _ in range(node_count)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, w: int, cap: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(w)
        self.cap.append(cap)
        self.head[w].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, limit: int) -> int:
        flow = 0
        while flow < limit:
            level = [-1] * self.n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for eid in self.head[u]:
                    w = self.to[eid]
                    if self.cap[eid] > 0 and level[w] < 0:
                        level[w] = level[u] + 1
                        queue.append(w)
            if level[t] < 0:
                break
            it = [0] * self.n

            def augment(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    eid = self.head[u][it[u]]
                    w = self.to[eid]
                    if self.cap[eid] > 0 and level[w] == level[u] + 1:
                        got = augment(w, min(pushed, self.cap[eid]))
                        if got > 0:
                            self.cap[eid] -= got
                            self.cap[eid ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while flow < limit:
                pushed = augment(s, limit - flow)
                if pushed == 0:
                    break
                flow += pushed
        return flow


def _vertex_capacity_flow(gamma: Graph, s: int, t: int, limit: int) -> int:
    # Split each vertex x into x_in = 2x and x_out = 2x+1 with a unit arc.
    dinic = _Dinic(2 * gamma.vertex_count)
    for x in range(gamma.vertex_count):
        dinic.add_arc(2 * x, 2 * x + 1, 1)
    for u, w in gamma.edges:
        dinic.add_arc(2 * u + 1, 2 * w, 1)
        dinic.add_arc(2 * w + 1, 2 * u, 1)
    return dinic.max_flow(2 * s + 1, 2 * t, limit)


def is_k_vertex_connected(gamma: Graph, k: int) -> bool:
    """Exact k-vertex-connectivity via Menger max-flow on the split network.

    True iff the graph has more than k vertices and no vertex cut of size
    below k; complete graphs count as k-connected for all k < n. Graphs with
    at most k vertices are reported not k-connected (the standard convention).
    """
    if k < 1:
        raise InvalidInputError("k must be positive")
    n = gamma.vertex_count
    if n <= k:
        return False
    degrees = [gamma.degree(v) for v in range(n)]
    if min(degrees) < k:
        # A vertex with degree < k and a non-neighbor is cut off by its
        # neighborhood; with n > k no vertex can be adjacent to all others
        # while having degree < k.
        return False
    # Any minimum cut either avoids the pivot (then it separates the pivot
    # from some non-neighbor) or contains it (then it separates two
    # non-adjacent neighbors of the pivot).
    pivot = min(range(n), key=lambda v: (degrees[v], v))
    pivot_nbrs = gamma.neighbors(pivot)
    for w in range(n):
        if w == pivot or gamma.has_edge(pivot, w):
            continue
        if _vertex_capacity_flow(gamma, pivot, w, k) < k:
            return False
    for x, y in itertools.combinations(pivot_nbrs, 2):
        if gamma.has_edge(x, y):
            continue
        if _vertex_capacity_flow(gamma, x, y, k) < k:
            return False
    return True


def zha_zhang_condition(theta: Hypergraph, d: int) -> bool:
    """Connectivity of hyperedges under the relation "share at least d+1 vertices"."""
    if d < 1:
        raise InvalidInputError("d must be positive")
    h = len(theta.hyperedges)
    if h == 0:
        return False
    visited = [False] * h
    visited[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        i = queue.popleft()
        for j in range(h):
            if not visited[j] and len(theta.hyperedges[i] & theta.hyperedges[j]) >= d + 1:
                visited[j] = True
                reached += 1
                queue.append(j)
    return reached == h
