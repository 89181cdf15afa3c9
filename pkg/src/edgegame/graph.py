"""Directed two-community graph with homophily/segregation metrics.

Nodes are integers. For a graph with ``n`` users per community, indices
``0 .. n-1`` are the red community and ``n .. 2n-1`` the blue community;
the labels are fixed for the lifetime of the graph. An edge ``(u, v)``
points from the friend ``u`` to the follower ``v``, i.e. it records that
``v`` follows ``u``.
"""

from __future__ import annotations

from typing import IO, Iterable, Iterator

import numpy as np

RED = 0
BLUE = 1


def segregation_value(inter_edges: int, n_red: int, n_blue: int) -> float:
    """Segregation score from an inter-community edge count.

    Returns ``1 - inter_edges / (2 * n_red * n_blue)``: 1.0 means no
    cross-community edges at all, 0.0 means every possible directed
    cross-community edge exists. An empty community counts as fully
    segregated (1.0); the opinion model hits that case when one opinion
    dies out.
    """
    if n_red < 0 or n_blue < 0:
        raise ValueError("community sizes must be non-negative")
    if n_red == 0 or n_blue == 0:
        return 1.0
    return 1.0 - inter_edges / (2.0 * n_red * n_blue)


class DirectedGraph:
    """Loop-free directed graph over two equal-size communities.

    Edge membership, per-node adjacency, and the inter-community edge
    count are all O(1); a full recommender pass over every cross pair is
    O(n^2) in the sparse-cross regime. Instances are treated as immutable
    snapshots while a simulation step reads them; mutation (``add_edge``)
    is reserved for the single writer between steps.
    """

    __slots__ = ("_n", "_out", "_in", "_n_edges", "_n_inter")

    def __init__(self, n_per_community: int, edges: Iterable[tuple[int, int]] = ()):
        if n_per_community < 1:
            raise ValueError("n_per_community must be >= 1")
        self._n = int(n_per_community)
        size = 2 * self._n
        self._out: list[set[int]] = [set() for _ in range(size)]
        self._in: list[set[int]] = [set() for _ in range(size)]
        self._n_edges = 0
        self._n_inter = 0
        for u, v in edges:
            self.add_edge(u, v)

    @property
    def n_per_community(self) -> int:
        return self._n

    @property
    def num_nodes(self) -> int:
        return 2 * self._n

    @property
    def num_edges(self) -> int:
        return self._n_edges

    def community(self, v: int) -> int:
        """RED for indices below ``n_per_community``, BLUE above."""
        self._check_node(v)
        return RED if v < self._n else BLUE

    def _check_node(self, v: int) -> None:
        if not 0 <= v < 2 * self._n:
            raise ValueError(f"node {v} out of range for 2N={2 * self._n}")

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self._out[u]

    def add_edge(self, u: int, v: int) -> bool:
        """Insert edge ``(u, v)``; returns False if it already existed."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError("self-loops are not allowed")
        if v in self._out[u]:
            return False
        self._out[u].add(v)
        self._in[v].add(u)
        self._n_edges += 1
        if (u < self._n) != (v < self._n):
            self._n_inter += 1
        return True

    def add_edges(self, pairs: Iterable[tuple[int, int]]) -> int:
        return sum(1 for u, v in pairs if self.add_edge(u, v))

    def out_neighbors(self, v: int) -> set[int]:
        """Followers of ``v``. The returned set is live; do not mutate."""
        self._check_node(v)
        return self._out[v]

    def in_neighbors(self, v: int) -> set[int]:
        """Friends of ``v`` (nodes that ``v`` follows). Live set; do not mutate."""
        self._check_node(v)
        return self._in[v]

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        for u, out in enumerate(self._out):
            for v in out:
                yield (u, v)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.iter_edges())

    @property
    def inter_edges(self) -> int:
        return self._n_inter

    # --- array interop -------------------------------------------------

    @classmethod
    def from_adjacency(cls, adj: np.ndarray, n_per_community: int) -> "DirectedGraph":
        """Build from a 2n x 2n boolean/0-1 adjacency matrix (adj[u, v] = edge u->v)."""
        size = 2 * int(n_per_community)
        if adj.shape != (size, size):
            raise ValueError(f"adjacency must be {size}x{size}, got {adj.shape}")
        if np.any(np.diagonal(adj)):
            raise ValueError("adjacency has self-loops on the diagonal")
        src, dst = np.nonzero(adj)
        return cls._from_arrays(n_per_community, src, dst)

    @classmethod
    def _from_arrays(cls, n_per_community: int, src: np.ndarray, dst: np.ndarray) -> "DirectedGraph":
        # Trusted input: no loops, no duplicates. Skips per-edge checks.
        g = cls(n_per_community)
        n = g._n
        out = g._out
        inn = g._in
        inter = 0
        for u, v in zip(src.tolist(), dst.tolist()):
            out[u].add(v)
            inn[v].add(u)
            if (u < n) != (v < n):
                inter += 1
        g._n_edges = len(src)
        g._n_inter = inter
        return g

    def to_adjacency(self) -> np.ndarray:
        size = 2 * self._n
        adj = np.zeros((size, size), dtype=bool)
        for u, out in enumerate(self._out):
            for v in out:
                adj[u, v] = True
        return adj

    # --- text dump format ----------------------------------------------
    # Header line "N=<n_per_community>", then one "src dst" line per edge,
    # sorted lexicographically by (src, dst).

    def dump(self, fp: IO[str]) -> None:
        fp.write(f"N={self._n}\n")
        for u, v in self.sorted_edges():
            fp.write(f"{u} {v}\n")

    def dumps(self) -> str:
        lines = [f"N={self._n}"]
        lines.extend(f"{u} {v}" for u, v in self.sorted_edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, fp: IO[str]) -> "DirectedGraph":
        header = fp.readline().strip()
        if not header.startswith("N="):
            raise ValueError(f"bad graph header: {header!r}")
        g = cls(int(header[2:]))
        for line in fp:
            line = line.strip()
            if not line:
                continue
            u, v = line.split()
            g.add_edge(int(u), int(v))
        return g

    def __repr__(self) -> str:
        return f"DirectedGraph(n_per_community={self._n}, edges={self._n_edges})"


def d_indicator(g: DirectedGraph, i: int, j: int) -> int:
    """1 iff the edge (i, j) exists and i, j sit in different communities."""
    if i == j:
        raise ValueError("d_indicator requires i != j")
    if g.community(i) == g.community(j):
        return 0
    return 1 if g.has_edge(i, j) else 0


def s_indicator(g: DirectedGraph, i: int, j: int) -> int:
    """1 iff the edge (i, j) exists and i, j sit in the same community."""
    if i == j:
        raise ValueError("s_indicator requires i != j")
    if g.community(i) != g.community(j):
        return 0
    return 1 if g.has_edge(i, j) else 0


def inter_edge_count(g: DirectedGraph) -> int:
    """Number of directed edges whose endpoints are in different communities."""
    return g.inter_edges


def segregation_measure(g: DirectedGraph) -> float:
    """Segregation of the graph: 1 minus realized over maximal cross edges."""
    return segregation_value(g.inter_edges, g.n_per_community, g.n_per_community)


def two_hop_count(g: DirectedGraph, i: int, j: int) -> int:
    """Count i's cross-community links into j's same-community friend set.

    A friend j' of j (edge (j', j) within j's community) contributes one
    for each direction in which it is linked with i: once if j' follows i
    (edge (i, j')) and once if i follows j' (edge (j', i)). i and j must
    be in different communities.
    """
    if g.community(i) == g.community(j):
        raise ValueError("two_hop_count requires i, j in different communities")
    n = g.n_per_community
    red_i = i < n
    total = 0
    # j' ranges over i's cross-community followers and friends; both are in
    # j's community, so only the edge (j', j) remains to check.
    for jp in g.out_neighbors(i):
        if (jp < n) != red_i and g.has_edge(jp, j):
            total += 1
    for jp in g.in_neighbors(i):
        if (jp < n) != red_i and g.has_edge(jp, j):
            total += 1
    return total
