"""Named example structures and generators used in tests and the CLI."""

from __future__ import annotations

import itertools

import numpy as np

from .errors import InvalidInputError
from .hypergraph import Graph, Hypergraph
from .rigidity import Framework


def fig1_hypergraph() -> Hypergraph:
    """Six vertices, two triples and two pairs; too sparse to be rigid."""
    return Hypergraph.from_hyperedges(6, [[0, 1, 5], [1, 2, 4], [4, 5], [3, 4]])


def fig2_graph() -> Graph:
    """Six-vertex companion graph whose neighborhoods are worth testing."""
    return Graph.from_edges(
        6, [(0, 1), (0, 5), (1, 2), (1, 5), (2, 4), (3, 4), (4, 5)]
    )


def pentagon_hypergraph() -> Hypergraph:
    """Five consecutive triples around a 5-cycle; every triple is relation-free."""
    return Hypergraph.from_hyperedges(
        5, [[i, (i + 1) % 5, (i + 2) % 5] for i in range(5)]
    )


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidInputError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to every leaf."""
    if leaves < 1:
        raise InvalidInputError("a star needs at least one leaf")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def wheel_graph(rim: int) -> Graph:
    """Hub 0 joined to a rim cycle on vertices 1..rim."""
    if rim < 3:
        raise InvalidInputError("a wheel needs a rim of at least 3")
    spokes = [(0, i) for i in range(1, rim + 1)]
    ring = [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph.from_edges(rim + 1, spokes + ring)


def complete_k_hypergraph(vertex_count: int, k: int) -> Hypergraph:
    """Every k-subset of the vertices as a hyperedge."""
    if not 1 <= k <= vertex_count:
        raise InvalidInputError(f"k must lie in [1, {vertex_count}]")
    return Hypergraph.from_hyperedges(
        vertex_count, itertools.combinations(range(vertex_count), k)
    )


def hexagonal_torus(m: int, n: int) -> Graph:
    """3-regular honeycomb lattice wrapped on a torus, 2mn vertices.

    Cell (i, j) holds two vertices (s = 0, 1); vertex ids are
    ((i mod m) * n + (j mod n)) * 2 + s.
    """
    if m < 2 or n < 2:
        raise InvalidInputError("need at least a 2x2 block of cells")

    def vid(i: int, j: int, s: int) -> int:
        return ((i % m) * n + (j % n)) * 2 + s

    edges = []
    for i in range(m):
        for j in range(n):
            edges.append((vid(i, j, 0), vid(i, j, 1)))
            edges.append((vid(i, j, 1), vid(i, j + 1, 0)))
            edges.append((vid(i, j, 1), vid(i + 1, j, 0)))
    return Graph.from_edges(2 * m * n, edges)


def trilateration_graph(vertex_count: int, d: int, seed: int | None = None) -> Graph:
    """Complete seed on d+2 vertices, then each vertex picks d+1 earlier ones."""
    if vertex_count < d + 2:
        raise InvalidInputError(f"need at least d+2 = {d + 2} vertices")
    rng = np.random.default_rng(seed)
    edges = list(itertools.combinations(range(d + 2), 2))
    for u in range(d + 2, vertex_count):
        anchors = rng.choice(u, size=d + 1, replace=False)
        edges.extend((int(a), u) for a in anchors)
    return Graph.from_edges(vertex_count, edges)


def generic_framework(
    structure: Graph | Hypergraph,
    d: int,
    seed: int | None = None,
    integer: bool = False,
    bound: int = 1000,
) -> Framework:
    """Random configuration for a structure: gaussian, or integers in [-bound, bound].

    Integer coordinates stay exact in floating point (for cross-checks against
    the prime-field tester); gaussian ones are generic for everything else.
    """
    rng = np.random.default_rng(seed)
    v = structure.vertex_count
    if integer:
        coords = rng.integers(-bound, bound + 1, size=(v, d)).astype(float)
    else:
        coords = rng.standard_normal((v, d))
    return Framework(structure, coords)
