"""Exact triangle and k-clique counts for regular graphs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import BadK
from .graph import Edge, RegularGraph, SimpleGraph


@dataclass(frozen=True)
class EdgeTriangleTable:
    """``t[e]`` = number of triangles through edge ``e = (u, v)``, ``u < v``."""

    t: dict[Edge, int]

    def total(self) -> int:
        return sum(self.t.values())

    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.t.values()).items()))

    def __getitem__(self, e: Edge) -> int:
        u, v = e
        return self.t[(u, v) if u < v else (v, u)]


def count_triangles(g: SimpleGraph) -> int:
    # each triangle u < v < w is counted once, from its smallest edge
    nb = g.nbr_sets
    total = 0
    for u in range(g.n):
        for v in g.adj[u]:
            if v > u:
                total += sum(1 for w in nb[u] & nb[v] if w > v)
    return total


def edge_triangle_table(g: SimpleGraph) -> EdgeTriangleTable:
    nb = g.nbr_sets
    return EdgeTriangleTable({(u, v): len(nb[u] & nb[v]) for u, v in g.edges()})


def _check_k(d: int, k: int) -> None:
    if not 3 <= k <= d + 1:
        raise BadK(f"k must satisfy 3 <= k <= d+1 = {d + 1}, got {k}")


def count_k_cliques(g: RegularGraph, k: int) -> int:
    """Number of k-node complete subgraphs.

    Each clique is grown from its smallest node through increasing
    candidates, so it is produced exactly once.
    """
    _check_k(g.d, k)
    return _count_cliques(g, k)


def _count_cliques(g: SimpleGraph, k: int) -> int:
    nb = g.nbr_sets

    def extend(cands: frozenset[int] | set[int], need: int) -> int:
        if need == 0:
            return 1
        if len(cands) < need:
            return 0
        if need == 1:
            return len(cands)
        total = 0
        for w in cands:
            total += extend({x for x in cands if x > w and x in nb[w]}, need - 1)
        return total

    return sum(extend({x for x in nb[v] if x > v}, k - 1) for v in range(g.n))


def count_cliques_within(g: SimpleGraph, nodes, k: int) -> int:
    """k-cliques whose nodes all lie in ``nodes``."""
    keep = set(nodes)
    sub = SimpleGraph(
        g.n, tuple(tuple(x for x in a if x in keep) if i in keep else () for i, a in enumerate(g.adj))
    )
    return _count_cliques(sub, k)


def t_max(n: int, d: int) -> Fraction:
    return Fraction(comb(d, 2) * n, 3)


def t_k_max(n: int, d: int, k: int) -> Fraction:
    _check_k(d, k)
    return Fraction(comb(d, k - 1) * n, k)


def threshold(value: Fraction) -> int:
    """Smallest integer count that is at least ``value``."""
    return -((-value.numerator) // value.denominator)


def node_in_kplus1_clique(g: RegularGraph, v: int) -> bool:
    """True iff ``{v} | N(v)`` induces a complete graph on d+1 nodes."""
    nb = g.nbr_sets
    block = nb[v] | {v}
    return all(block <= nb[x] | {x} for x in nb[v])


def census_report(g: RegularGraph, ks=None) -> dict:
    """Census record: T, T_max, the ratio c = T/T_max, t_e histogram, k-clique counts."""
    T = count_triangles(g)
    tm = t_max(g.n, g.d)
    if ks is None:
        ks = range(3, min(g.d + 1, 5) + 1)
    return {
        "n": g.n,
        "d": g.d,
        "T": T,
        "T_max": str(tm),
        "ratio_c": str(Fraction(T) / tm) if tm else None,
        "histogram_of_t_e": {str(k): v for k, v in edge_triangle_table(g).histogram().items()},
        "k_clique_counts": {str(k): count_k_cliques(g, k) for k in ks},
    }
