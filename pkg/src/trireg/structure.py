"""Good/bad edges and nodes, K_{d+1} detection, dense spots and pseudo-cliques."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb

from .bounds import default_eps_delta
from .census import count_cliques_within, count_triangles, edge_triangle_table
from .errors import NotAGoodEdge, PreconditionD2N
from .graph import Edge, RegularGraph, SimpleGraph, build_simple_graph


class Mode(str, Enum):
    FIXED_D = "FIXED_D"
    GROWING_D = "GROWING_D"


def as_fraction(x) -> Fraction:
    """Exact value of a threshold parameter; floats are read as typed (0.05 -> 1/20)."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def bad_edge_cap(d: int, delta) -> Fraction:
    return d - 1 - as_fraction(delta) * d


def is_delta_bad(t: int, d: int, delta) -> bool:
    """An edge in at least one triangle but clearly short of the d-1 maximum.

    The cut is strict: t == d-1-delta*d is good. See README, "Conventions".
    """
    return 1 <= t < bad_edge_cap(d, delta)


class DisjointSet:
    """Union-find over hashable items with path halving and union by size."""

    def __init__(self, items=()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


@dataclass(frozen=True)
class BadnessReport:
    n: int
    d: int
    delta: Fraction
    bad_edges: tuple[Edge, ...]
    bad_nodes_fixed: tuple[int, ...]
    bad_nodes_growing: tuple[int, ...]

    @property
    def bad_edge_fraction(self) -> Fraction:
        m = self.d * self.n // 2
        return Fraction(len(self.bad_edges), m) if m else Fraction(0)

    @property
    def bad_node_fraction_fixed(self) -> Fraction:
        return Fraction(len(self.bad_nodes_fixed), self.n)

    @property
    def bad_node_fraction_growing(self) -> Fraction:
        return Fraction(len(self.bad_nodes_growing), self.n)


def _in_kplus1_clique(g: RegularGraph) -> list[bool]:
    nb = g.nbr_sets
    out = []
    for v in range(g.n):
        block = nb[v] | {v}
        out.append(all(block <= nb[x] | {x} for x in nb[v]))
    return out


def classify_badness(g: RegularGraph, delta) -> BadnessReport:
    delta = as_fraction(delta)
    table = edge_triangle_table(g).t
    bad = tuple(e for e, t in table.items() if is_delta_bad(t, g.d, delta))
    in_tri = [False] * g.n
    for (u, v), t in table.items():
        if t:
            in_tri[u] = in_tri[v] = True
    in_clique = _in_kplus1_clique(g)
    fixed = tuple(v for v in range(g.n) if in_tri[v] and not in_clique[v])
    count = [0] * g.n
    for u, v in bad:
        count[u] += 1
        count[v] += 1
    need = delta * g.d
    growing = tuple(v for v in range(g.n) if count[v] and count[v] >= need)
    return BadnessReport(g.n, g.d, delta, bad, fixed, growing)


def find_d_plus_1_cliques(g: RegularGraph) -> list[frozenset[int]]:
    """All K_{d+1} subgraphs. In a d-regular graph each is a whole component
    ``{v} | N(v)``, so they are pairwise disjoint."""
    seen = set()
    out = []
    for v, ok in enumerate(_in_kplus1_clique(g)):
        if ok:
            block = frozenset(g.nbr_sets[v] | {v})
            if block not in seen:
                seen.add(block)
                out.append(block)
    return out


@dataclass(frozen=True)
class TriangleSubgraph:
    """The host graph with every triangle-free edge removed; ``d`` is the host degree."""

    graph: SimpleGraph
    d: int
    t: dict[Edge, int]

    def t_e(self, u: int, v: int) -> int:
        return self.t[(u, v) if u < v else (v, u)]


def strip_triangle_free_edges(g: RegularGraph) -> TriangleSubgraph:
    table = edge_triangle_table(g).t
    sub = build_simple_graph(g.n, [e for e, t in table.items() if t >= 1])
    kept = {e: t for e, t in table.items() if t >= 1}
    recomputed = edge_triangle_table(sub).t
    # every triangle survives, so no t_e changes
    if recomputed != kept:
        raise AssertionError("removing triangle-free edges changed some t_e")
    return TriangleSubgraph(sub, g.d, kept)


@dataclass(frozen=True)
class DenseSpot:
    nodes: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.nodes)


def is_dense_spot(gp: TriangleSubgraph, nodes, delta) -> bool:
    nodes = frozenset(nodes)
    if len(nodes) > gp.d + 1:
        return False
    need = (1 - 4 * as_fraction(delta)) * gp.d
    nb = gp.graph.nbr_sets
    return all(len(nb[x] & nodes) >= need for x in nodes)


def dense_spot_from_edge(gp: TriangleSubgraph, u: int, v: int, delta) -> DenseSpot | None:
    """Dense spot {u, v} + common neighbors joined to both by good edges.

    Returns None when the candidate fails the dense-spot test.
    """
    delta = as_fraction(delta)
    d = gp.d
    if not gp.graph.has_edge(u, v) or is_delta_bad(gp.t_e(u, v), d, delta):
        raise NotAGoodEdge(f"({u}, {v}) is not a good edge")
    nb = gp.graph.nbr_sets
    h0 = {
        w
        for w in nb[u] & nb[v]
        if not is_delta_bad(gp.t_e(u, w), d, delta) and not is_delta_bad(gp.t_e(v, w), d, delta)
    }
    nodes = frozenset(h0 | {u, v})
    return DenseSpot(nodes) if is_dense_spot(gp, nodes, delta) else None


@dataclass(frozen=True)
class PseudoClique:
    nodes: frozenset[int]
    spot_count: int

    @property
    def size(self) -> int:
        return len(self.nodes)


def pseudo_clique_size_bound(d: int, delta) -> Fraction:
    delta = as_fraction(delta)
    return (1 - 8 * delta) / (1 - 13 * delta) * (d + 1)


@dataclass
class StructureReport:
    mode: Mode
    n: int
    d: int
    blocks: list[frozenset[int]]
    covered_triangles: int
    total_triangles: int
    badness: BadnessReport
    delta: Fraction | None = None
    eps: float | None = None
    spot_count: int = 0
    checks: dict[str, bool | None] = field(default_factory=dict)
    thresholds: dict[str, object] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def coverage_fraction(self) -> Fraction:
        if self.total_triangles == 0:
            return Fraction(1)
        return Fraction(self.covered_triangles, self.total_triangles)

    @property
    def bad_nodes(self) -> tuple[int, ...]:
        if self.mode is Mode.FIXED_D:
            return self.badness.bad_nodes_fixed
        return self.badness.bad_nodes_growing

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "n": self.n,
            "d": self.d,
            "delta": None if self.delta is None else str(self.delta),
            "eps": self.eps,
            "blocks": [{"nodes": sorted(b), "size": len(b)} for b in self.blocks],
            "bad_edges": [list(e) for e in self.badness.bad_edges],
            "bad_nodes": list(self.bad_nodes),
            "covered_triangles": self.covered_triangles,
            "total_triangles": self.total_triangles,
            "coverage_fraction": str(self.coverage_fraction),
            "checks": self.checks,
            "thresholds": self.thresholds,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _covered(g: RegularGraph, blocks) -> int:
    return sum(count_cliques_within(g, b, 3) for b in blocks)


def assemble_pseudo_cliques(g: RegularGraph, delta, eps=None) -> StructureReport:
    """Pseudo-cliques from one dense spot per good edge between good nodes.

    Spots sharing a node are merged with a disjoint-set structure. The
    structural facts this relies on (pairwise overlap of intersecting spots,
    transitivity, the size bound) are checked and recorded in ``checks``.
    """
    delta = as_fraction(delta)
    d = g.d
    notes = []
    if delta >= Fraction(1, 16):
        notes.append(f"delta = {float(delta):.4f} >= 1/16: size bound not guaranteed")
    if delta * d < 1:
        notes.append(f"delta*d = {float(delta * d):.3f} < 1: the 9*delta*d slack in the size bound is not available")
    for msg in notes:
        warnings.warn(msg)

    badness = classify_badness(g, delta)
    gp = strip_triangle_free_edges(g)
    bad_nodes = set(badness.bad_nodes_growing)
    good_edges = [
        (u, v)
        for (u, v), t in gp.t.items()
        if not is_delta_bad(t, d, delta) and u not in bad_nodes and v not in bad_nodes
    ]
    spots: list[frozenset[int]] = []
    failed = 0
    edge_spot: dict[Edge, frozenset[int]] = {}
    for u, v in good_edges:
        spot = dense_spot_from_edge(gp, u, v, delta)
        if spot is None:
            failed += 1
            continue
        edge_spot[(u, v)] = spot.nodes
        spots.append(spot.nodes)
    unique = sorted(set(spots), key=lambda s: (min(s), sorted(s)))

    dsu = DisjointSet()
    for s in unique:
        first = min(s)
        dsu.add(first)
        for x in s:
            dsu.add(x)
            dsu.union(first, x)
    comp_of_spot = [dsu.find(min(s)) for s in unique]
    members: dict[int, list[int]] = {}
    for i, r in enumerate(comp_of_spot):
        members.setdefault(r, []).append(i)
    cliques = []
    for r, idx in members.items():
        nodes = frozenset().union(*(unique[i] for i in idx))
        cliques.append(PseudoClique(nodes, len(idx)))
    cliques.sort(key=lambda k: min(k.nodes))

    overlap = (1 - 8 * delta) * d
    overlap_ok = all(not (a & b) or len(a & b) >= overlap for a, b in combinations(unique, 2))
    transitive_ok = all(unique[i] & unique[j] for idx in members.values() for i, j in combinations(idx, 2))
    disjoint = all(not (a.nodes & b.nodes) for a, b in combinations(cliques, 2))
    size_ok = None
    if delta < Fraction(1, 16):
        bound = pseudo_clique_size_bound(d, delta)
        size_ok = all(k.size <= bound for k in cliques)
    where = {x: i for i, k in enumerate(cliques) for x in k.nodes}
    containment = all(
        u in where and where[u] == where.get(v) for u, v in good_edges if (u, v) in edge_spot
    ) and failed == 0

    blocks = [k.nodes for k in cliques]
    total = count_triangles(g)
    covered = _covered(g, blocks)
    uncovered_cap = len(badness.bad_edges) * d + len(badness.bad_nodes_growing) * comb(d, 2)
    report = StructureReport(
        Mode.GROWING_D,
        g.n,
        d,
        blocks,
        covered,
        total,
        badness,
        delta=delta,
        eps=eps,
        spot_count=len(unique),
        checks={
            "spot_overlap": overlap_ok,
            "spot_transitive": transitive_ok,
            "pseudo_cliques_disjoint": disjoint,
            "size_bound": size_ok,
            "good_edge_containment": containment,
            "uncovered_within_bad_budget": total - covered <= uncovered_cap,
        },
        warnings=notes,
    )
    report.thresholds = {
        "pseudo_clique_size_bound": float(pseudo_clique_size_bound(d, delta)) if delta < Fraction(1, 13) else None,
        "spot_overlap_min": float(overlap),
        "uncovered_triangle_cap": uncovered_cap,
        "failed_spots": failed,
    }
    return report


def _eps_n(n: int) -> float | None:
    if n < 3:
        return None
    return math.log(math.log(n)) / math.log(n)


def structure_report(g: RegularGraph, c, mode=Mode.FIXED_D, delta=None) -> StructureReport:
    mode = Mode(mode)
    c = Fraction(c)
    if mode is Mode.FIXED_D:
        cliques = find_d_plus_1_cliques(g)
        badness = classify_badness(g, Fraction(1, g.d) if g.d else Fraction(1))
        rep = StructureReport(mode, g.n, g.d, cliques, _covered(g, cliques), count_triangles(g), badness)
        rep.checks = {"cliques_disjoint": all(not (a & b) for a, b in combinations(cliques, 2))}
        eps_n = _eps_n(g.n)
        frac = badness.bad_node_fraction_fixed
        rep.thresholds = {
            "eps_n": eps_n,
            "bad_node_fraction": float(frac),
            "below_eps_n": None if eps_n is None else float(frac) < eps_n,
            "clique_count": len(cliques),
            "c_n_over_d_plus_1": float(c * g.n / (g.d + 1)),
        }
        return rep

    eps = None
    if delta is None:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                eps, dlt = default_eps_delta(g.n, g.d, c)
            delta = dlt if dlt < 1 / 16 else Fraction(1, 20)
            if delta == Fraction(1, 20):
                eps = None
        except (PreconditionD2N, ValueError):
            delta = Fraction(1, 20)
    delta = as_fraction(delta)
    if eps is None:
        eps = float(delta) ** 2
    rep = assemble_pseudo_cliques(g, delta, eps=eps)
    rep.thresholds.update(
        {
            "pseudo_clique_count": len(rep.blocks),
            "c_n_over_d": float(c * g.n / g.d) if g.d else None,
            "bad_edge_fraction": float(rep.badness.bad_edge_fraction),
            "bad_node_fraction": float(rep.badness.bad_node_fraction_growing),
        }
    )
    return rep
