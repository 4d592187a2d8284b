"""Exhaustive oracles over labeled pairings and labeled d-regular graphs.

Everything here is exact and only meant for tiny (n, d). Budgets are
explicit: exceeding them raises :class:`BudgetExceeded` instead of
silently sampling.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator

import numpy as np

from .census import count_k_cliques, count_triangles, t_k_max, t_max, threshold
from .errors import BudgetExceeded, DegreeViolation, ParityViolation
from .graph import PortLabeledGraph, RegularGraph, build_graph, relabel_nodes
from .reveal import RevealProfile, reveal_threshold, phi_weights, all_permutations

PAIRING_DN_CAP = 18
GRAPH_CAP = 1_000_000


def double_factorial(k: int) -> int:
    """k!! for odd k (and 1 for k <= 0)."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _check_nd(n: int, d: int) -> None:
    if not 0 <= d < n:
        raise DegreeViolation(f"need 0 <= d < n, got d={d}, n={n}")
    if (d * n) % 2:
        raise ParityViolation(f"d*n = {d * n} is odd")


def _check_pairing_budget(n: int, d: int, cap: int) -> None:
    _check_nd(n, d)
    if d * n > cap:
        raise BudgetExceeded(
            f"(dn-1)!! = {double_factorial(d * n - 1)} pairings at dn={d * n} exceeds cap dn <= {cap}"
        )


@dataclass
class EnumerationResult:
    n: int
    d: int
    total_pairings: int = 0
    simple_pairings: int = 0
    total_simple_graphs: int = 0
    count_by_triangles: dict[int, int] = field(default_factory=dict)
    phi_histogram: dict[int, int] = field(default_factory=dict)

    def profile(self, key: int) -> RevealProfile:
        E = self.d * self.n // 2
        return RevealProfile(tuple((key >> k) & 1 for k in range(E)))

    def preimages_by_weight(self) -> dict[int, list[int]]:
        """Weight -> sorted preimage sizes of the realized profiles of that weight."""
        out: dict[int, list[int]] = {}
        for key, cnt in self.phi_histogram.items():
            out.setdefault(bin(key).count("1"), []).append(cnt)
        return {w: sorted(v) for w, v in sorted(out.items())}

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "total_pairings": self.total_pairings,
            "simple_pairings": self.simple_pairings,
            "total_simple_graphs": self.total_simple_graphs,
            "count_by_triangles": {str(k): v for k, v in sorted(self.count_by_triangles.items())},
            "phi_histogram": {
                "".join(map(str, self.profile(k).bits)): v for k, v in sorted(self.phi_histogram.items())
            },
            "preimages_by_weight": {str(w): v for w, v in self.preimages_by_weight().items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# -- pure Python traversal (reference, supports visitors) ---------------------------


def iter_pairings(n: int, d: int, cap: int = PAIRING_DN_CAP) -> Iterator[list[tuple[int, int]]]:
    """Every perfect matching of the d*n half-edges, as a list of half-edge
    pairs in the order they are created (lowest free half-edge first)."""
    _check_pairing_budget(n, d, cap)
    H = n * d
    free = [True] * H
    path: list[tuple[int, int]] = []

    def rec(start: int):
        a = start
        while a < H and not free[a]:
            a += 1
        if a >= H:
            yield list(path)
            return
        free[a] = False
        for b in range(a + 1, H):
            if free[b]:
                free[b] = False
                path.append((a, b))
                yield from rec(a + 1)
                path.pop()
                free[b] = True
        free[a] = True

    yield from rec(0)


def pairing_to_graph(n: int, d: int, pairing) -> PortLabeledGraph | None:
    """The port-labeled graph of a pairing, or None if it has a loop or repeated edge."""
    edges = set()
    label: list[dict[int, int]] = [{} for _ in range(n)]
    for a, b in pairing:
        i, j = a // d, b // d
        key = (min(i, j), max(i, j))
        if i == j or key in edges:
            return None
        edges.add(key)
        label[i][j] = a % d + 1
        label[j][i] = b % d + 1
    g = build_graph(n, d, sorted(edges))
    return PortLabeledGraph(g, tuple(tuple(label[i][j] for j in g.adj[i]) for i in range(n)))


def enumerate_pairings(
    n: int,
    d: int,
    visitor: Callable[[list[tuple[int, int]], PortLabeledGraph | None], None] | None = None,
    cap: int = PAIRING_DN_CAP,
) -> EnumerationResult:
    """Visit all (dn-1)!! pairings in Python; the visitor gets the multigraph
    (as node pairs) and the port-labeled graph when it is simple."""
    from .reveal import encode_phi

    res = EnumerationResult(n, d)
    tri: Counter = Counter()
    hist: Counter = Counter()
    for pairing in iter_pairings(n, d, cap):
        res.total_pairings += 1
        gs = pairing_to_graph(n, d, pairing)
        if visitor is not None:
            visitor([(a // d, b // d) for a, b in pairing], gs)
        if gs is None:
            continue
        res.simple_pairings += 1
        tri[count_triangles(gs.graph)] += 1
        hist[encode_phi(gs).as_int()] += 1
    _finish(res, tri, hist)
    return res


def _finish(res: EnumerationResult, tri_pairings, hist) -> None:
    labelings = math.factorial(res.d) ** res.n
    if res.simple_pairings % labelings:
        raise AssertionError("simple pairings not divisible by (d!)^n")
    res.total_simple_graphs = res.simple_pairings // labelings
    res.count_by_triangles = {int(t): int(c) // labelings for t, c in sorted(tri_pairings.items()) if c}
    res.phi_histogram = {int(k): int(v) for k, v in sorted(hist.items()) if v}


# -- compiled sweep --------------------------------------------------------------------


def _shard(args):
    from ._pairing_kernel import sweep

    n, d, lo, hi, prune = args
    E = n * d // 2
    hp = np.zeros(1 << E, dtype=np.int64)
    ht = np.zeros(E * max(d - 1, 1) // 3 + 2, dtype=np.int64)
    leaves, simple = sweep(n, d, lo, hi, prune, hp, ht)
    return int(leaves), int(simple), hp, ht


def sweep_pairings(
    n: int, d: int, prune: bool = True, jobs: int = 1, cap: int = PAIRING_DN_CAP
) -> EnumerationResult:
    """Compiled equivalent of :func:`enumerate_pairings` (no visitor).

    The first edge's partner splits the tree into ``dn - 1`` shards that
    can run in separate processes; their histograms add exactly.
    """
    _check_pairing_budget(n, d, cap)
    res = EnumerationResult(n, d)
    if d == 0:
        res.total_pairings = res.simple_pairings = 1
        _finish(res, Counter({0: 1}), Counter({0: 1}))
        return res
    H = n * d
    shards = [(n, d, b, b + 1, prune) for b in range(1, H)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_shard, shards))
    else:
        parts = [_shard((n, d, 1, H, prune))]
    hp = sum(p[2] for p in parts)
    ht = sum(p[3] for p in parts)
    res.total_pairings = sum(p[0] for p in parts)
    res.simple_pairings = sum(p[1] for p in parts)
    _finish(res, Counter(dict(enumerate(ht.tolist()))), Counter(dict(enumerate(hp.tolist()))))
    return res


def phi_preimage_histogram(n: int, d: int, backend: str = "compiled", jobs: int = 1) -> EnumerationResult:
    """Exact |phi^{-1}(x)| for every realized profile x, from a full pairing sweep."""
    if backend == "python":
        return enumerate_pairings(n, d)
    return sweep_pairings(n, d, jobs=jobs)


# -- labeled graphs ----------------------------------------------------------------------


def enumerate_regular_graphs(n: int, d: int, max_graphs: int = GRAPH_CAP) -> Iterator[RegularGraph]:
    """Each labeled simple d-regular graph on n nodes exactly once.

    The lowest node with missing degree picks all its remaining neighbors at
    once among higher nodes, so every edge set arises from a single branch.
    """
    _check_nd(n, d)
    need = [d] * n
    nbrs = [set() for _ in range(n)]
    edges: list[tuple[int, int]] = []
    produced = 0

    def rec(v: int):
        nonlocal produced
        while v < n and need[v] == 0:
            v += 1
        if v == n:
            produced += 1
            if produced > max_graphs:
                raise BudgetExceeded(f"more than {max_graphs} graphs at n={n}, d={d}")
            yield build_graph(n, d, edges)
            return
        cands = [w for w in range(v + 1, n) if need[w] > 0 and w not in nbrs[v]]
        for chosen in combinations(cands, need[v]):
            k = need[v]
            need[v] = 0
            for w in chosen:
                need[w] -= 1
                nbrs[v].add(w)
                nbrs[w].add(v)
                edges.append((v, w))
            yield from rec(v + 1)
            for w in chosen:
                need[w] += 1
                nbrs[v].discard(w)
                nbrs[w].discard(v)
                edges.pop()
            need[v] = k

    yield from rec(0)


def count_regular_graphs(n: int, d: int, max_graphs: int = GRAPH_CAP) -> int:
    """|G_d(n)|. Degrees 0, 1, n-2 and n-1 use closed forms (complements of
    perfect matchings); everything else is enumerated."""
    if n == 0:
        return 1
    _check_nd(n, d)
    if d == 0 or d == n - 1:
        return 1
    if d == 1 or d == n - 2:
        return double_factorial(n - 1)
    return sum(1 for _ in enumerate_regular_graphs(n, d, max_graphs))


def count_by_triangles(n: int, d: int, max_graphs: int = GRAPH_CAP) -> dict[int, int]:
    """T -> number of labeled d-regular graphs with exactly T triangles.

    For d <= 1 every graph is triangle-free, so the count is closed-form.
    """
    _check_nd(n, d)
    if d <= 1:
        return {0: count_regular_graphs(n, d)}
    tally = Counter(count_triangles(g) for g in enumerate_regular_graphs(n, d, max_graphs))
    return dict(sorted(tally.items()))


def exact_conditioned_count(n: int, d: int, c, max_graphs: int = GRAPH_CAP) -> int:
    """|{g in G_d(n) : T(g) >= ceil(c * T_max)}|."""
    need = threshold(Fraction(c) * t_max(n, d))
    return sum(v for t, v in count_by_triangles(n, d, max_graphs).items() if t >= need)


def exact_k_clique_conditioned_count(n: int, d: int, c, k: int, max_graphs: int = GRAPH_CAP) -> int:
    need = threshold(Fraction(c) * t_k_max(n, d, k))
    return sum(1 for g in enumerate_regular_graphs(n, d, max_graphs) if count_k_cliques(g, k) >= need)


# -- orbit identity -------------------------------------------------------------------


def orbit_identity(gs: PortLabeledGraph, c) -> tuple[Fraction, Fraction]:
    """Both sides of |S_n G* & phi^{-1}(L)| / |S_n G*| = |{sigma : phi(G*_sigma) in L}| / n!.

    The left side is computed on the materialized orbit, the right side by
    sweeping permutations.
    """
    from .reveal import encode_phi

    g = gs.graph
    thr = reveal_threshold(g.n, g.d, c)
    perms = all_permutations(g.n)
    orbit = {relabel_nodes(gs, sigma) for sigma in perms.tolist()}
    in_L = sum(1 for h in orbit if encode_phi(h).weight >= thr)
    hits = int((phi_weights(g, perms) >= thr).sum())
    return Fraction(in_L, len(orbit)), Fraction(hits, len(perms))
