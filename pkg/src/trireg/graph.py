"""Simple d-regular graphs, port labelings and the node-relabeling action.

Nodes are 0-indexed integers. Adjacency lists are stored sorted so that
neighbor intersections and orderings are deterministic.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeViolation,
    InvalidEdge,
    LabelViolation,
    NonSimple,
    NotAPermutation,
    ParityViolation,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on nodes ``0..n-1`` with sorted adjacency."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    @cached_property
    def nbr_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adj)

    def edges(self) -> list[Edge]:
        """All edges ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbr_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])


@dataclass(frozen=True)
class RegularGraph(SimpleGraph):
    """A validated simple d-regular graph. Build with :func:`build_graph`."""

    d: int = 0


@dataclass(frozen=True)
class EdgeRef:
    u: int
    v: int

    def __post_init__(self):
        if not self.u < self.v:
            raise InvalidEdge(f"EdgeRef requires u < v, got ({self.u}, {self.v})")

    def check(self, g: SimpleGraph) -> "EdgeRef":
        if not g.has_edge(self.u, self.v):
            raise InvalidEdge(f"({self.u}, {self.v}) is not an edge")
        return self


def _adjacency(n: int, edges: Iterable[Sequence[int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    seen: set[Edge] = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidEdge(f"edge ({u}, {v}) has a node outside 0..{n - 1}")
        if u == v:
            raise NonSimple(f"self-loop at node {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise NonSimple(f"duplicate edge {key}")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
    for a in adj:
        a.sort()
    return adj


def build_simple_graph(n: int, edges: Iterable[Sequence[int]]) -> SimpleGraph:
    adj = _adjacency(n, edges)
    return SimpleGraph(n, tuple(tuple(a) for a in adj))


def build_graph(n: int, d: int, edges: Iterable[Sequence[int]]) -> RegularGraph:
    """Validate an edge list and return the corresponding :class:`RegularGraph`.

    Raises
    ------
    ParityViolation
        If ``d * n`` is odd.
    NonSimple
        On a self-loop or repeated pair.
    DegreeViolation
        If some node does not have exactly ``d`` neighbors, or ``d >= n``.
    """
    if n < 1:
        raise DegreeViolation(f"n must be positive, got {n}")
    if not 0 <= d < n:
        raise DegreeViolation(f"need 0 <= d < n, got d={d}, n={n}")
    if (d * n) % 2:
        raise ParityViolation(f"d*n = {d * n} is odd")
    adj = _adjacency(n, edges)
    for v, a in enumerate(adj):
        if len(a) != d:
            raise DegreeViolation(f"node {v} has degree {len(a)}, expected {d}")
    return RegularGraph(n, tuple(tuple(a) for a in adj), d)


def disjoint_union(graphs: Sequence[RegularGraph]) -> RegularGraph:
    """Disjoint union of graphs sharing the same degree, relabeled consecutively."""
    if not graphs:
        raise DegreeViolation("empty union")
    d = graphs[0].d
    edges: list[Edge] = []
    offset = 0
    for g in graphs:
        if g.d != d:
            raise DegreeViolation("all parts must have the same degree")
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return build_graph(offset, d, edges)


@dataclass(frozen=True)
class PortLabeledGraph:
    """A regular graph with a bijection from each node's edges to labels 1..d.

    ``ports[i][k]`` is the label, at node ``i``, of the edge to ``graph.adj[i][k]``.
    """

    graph: RegularGraph
    ports: tuple[tuple[int, ...], ...]

    @cached_property
    def _label_map(self) -> tuple[dict[int, int], ...]:
        return tuple(dict(zip(a, p)) for a, p in zip(self.graph.adj, self.ports))

    def label(self, node: int, neighbor: int) -> int:
        return self._label_map[node][neighbor]

    def edge_labels(self, u: int, v: int) -> tuple[int, int]:
        return self.label(u, v), self.label(v, u)


def attach_ports(
    g: RegularGraph,
    ports: Sequence[Mapping[int, int] | Sequence[int]] | None = None,
) -> PortLabeledGraph:
    """Attach port labels to ``g``.

    ``ports[i]`` is either a mapping ``neighbor -> label`` or a sequence of
    labels aligned with the sorted adjacency ``g.adj[i]``. With ``ports=None``
    the k-th smallest neighbor gets label k.
    """
    if ports is None:
        return PortLabeledGraph(g, tuple(tuple(range(1, g.d + 1)) for _ in range(g.n)))
    if len(ports) != g.n:
        raise LabelViolation(f"expected labels for {g.n} nodes, got {len(ports)}")
    out = []
    want = list(range(1, g.d + 1))
    for i, p in enumerate(ports):
        if isinstance(p, Mapping):
            if set(p) != set(g.adj[i]):
                raise LabelViolation(f"node {i}: labels must cover exactly its neighbors")
            row = tuple(int(p[j]) for j in g.adj[i])
        else:
            row = tuple(int(x) for x in p)
        if sorted(row) != want:
            raise LabelViolation(f"node {i}: labels {row} are not a bijection onto 1..{g.d}")
        out.append(row)
    return PortLabeledGraph(g, tuple(out))


def random_ports(g: RegularGraph, rng) -> PortLabeledGraph:
    """Uniformly random port labeling drawn from a numpy Generator."""
    return PortLabeledGraph(
        g, tuple(tuple(int(x) + 1 for x in rng.permutation(g.d)) for _ in range(g.n))
    )


def check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    s = tuple(int(x) for x in sigma)
    if len(s) != n or sorted(s) != list(range(n)):
        raise NotAPermutation(f"not a permutation of 0..{n - 1}: {s}")
    return s


def inverse_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def relabel_graph(g: RegularGraph, sigma: Sequence[int]) -> RegularGraph:
    s = check_permutation(sigma, g.n)
    return build_graph(g.n, g.d, [(s[u], s[v]) for u, v in g.edges()])


def relabel_nodes(gs: PortLabeledGraph, sigma: Sequence[int]) -> PortLabeledGraph:
    """Apply the node permutation ``i -> sigma[i]``, carrying port labels along."""
    s = check_permutation(sigma, gs.graph.n)
    g = relabel_graph(gs.graph, s)
    inv = inverse_permutation(s)
    ports = []
    for new_i in range(g.n):
        old_i = inv[new_i]
        ports.append(tuple(gs.label(old_i, inv[new_j]) for new_j in g.adj[new_i]))
    return PortLabeledGraph(g, tuple(ports))


# -- edge-list files ------------------------------------------------------------


def format_edgelist(g: RegularGraph) -> str:
    lines = [f"{g.n} {g.d}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> RegularGraph:
    """Parse the ``n d`` header + ``u v`` lines format (0-indexed, ``u < v``)."""
    rows = [ln.split() for ln in io.StringIO(text) if ln.strip()]
    if not rows:
        raise InvalidEdge("empty edge list")
    try:
        n, d = (int(x) for x in rows[0])
    except ValueError:
        raise InvalidEdge(f"bad header line: {' '.join(rows[0])!r}") from None
    edges = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise InvalidEdge(f"line {lineno}: expected two node ids")
        try:
            u, v = int(row[0]), int(row[1])
        except ValueError:
            raise InvalidEdge(f"line {lineno}: non-integer node id") from None
        if u == v:
            raise NonSimple(f"line {lineno}: self-loop at {u}")
        if u > v:
            raise InvalidEdge(f"line {lineno}: expected u < v, got {u} {v}")
        edges.append((u, v))
    return build_graph(n, d, edges)


def read_edgelist(path: str | os.PathLike) -> RegularGraph:
    with open(path) as fh:
        return parse_edgelist(fh.read())


def write_edgelist(g: RegularGraph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_edgelist(g))


# -- a few named graphs used throughout tests and examples -------------------------


def complete_graph(k: int) -> RegularGraph:
    return build_graph(k, k - 1, [(u, v) for u in range(k) for v in range(u + 1, k)])


def cycle_graph(n: int) -> RegularGraph:
    return build_graph(n, 2, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> RegularGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, 3, outer + spokes + inner)


def prism_graph() -> RegularGraph:
    """Triangular prism: triangles {0,1,2} and {3,4,5} joined by a matching."""
    return build_graph(6, 3, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


def matched_complement(d: int) -> RegularGraph:
    """K_{d+2} minus the perfect matching {2i, 2i+1}; d-regular, needs d even."""
    k = d + 2
    if k % 2:
        raise ParityViolation(f"K_{k} has no perfect matching (d={d} is odd)")
    return build_graph(
        k, d, [(u, v) for u in range(k) for v in range(u + 1, k) if not (u % 2 == 0 and v == u + 1)]
    )
