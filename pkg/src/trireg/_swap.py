"""Mutable double-edge-swap state with incremental triangle bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .census import count_triangles
from .graph import RegularGraph, build_graph


@dataclass(frozen=True)
class SwapProposal:
    """Replace edges ``(u1, v1), (u2, v2)`` by ``(u1, v2), (u2, v1)``.

    ``i`` and ``j`` index the two removed edges in the state's edge list.
    """

    i: int
    j: int
    u1: int
    v1: int
    u2: int
    v2: int

    @property
    def removed(self):
        return (self.u1, self.v1), (self.u2, self.v2)

    @property
    def added(self):
        return (self.u1, self.v2), (self.u2, self.v1)


class RandomStream:
    """Batched draws from a numpy Generator; one chain step needs a handful of numbers."""

    def __init__(self, rng: np.random.Generator, n_edges: int, batch: int = 8192):
        self.rng = rng
        self.n_edges = n_edges
        self.batch = batch
        self._pos = batch

    def _refill(self):
        self._ij = self.rng.integers(0, self.n_edges, size=(self.batch, 2)).tolist()
        self._flip = self.rng.integers(0, 2, size=self.batch).tolist()
        self._u = self.rng.random(self.batch).tolist()
        self._pos = 0

    def next(self):
        if self._pos >= self.batch:
            self._refill()
        k = self._pos
        self._pos += 1
        i, j = self._ij[k]
        return i, j, self._flip[k], self._u[k]


class SwapState:
    def __init__(self, g: RegularGraph):
        self.n = g.n
        self.d = g.d
        self.nbrs = [set(a) for a in g.adj]
        self.edges = [list(e) for e in g.edges()]
        self.T = count_triangles(g)

    def propose(self, i: int, j: int, flip: int) -> SwapProposal | None:
        """Proposal from edge indices and an orientation bit, or None if it
        would create a loop or a repeated edge."""
        if i == j:
            return None
        u1, v1 = self.edges[i]
        u2, v2 = self.edges[j]
        if flip:
            u2, v2 = v2, u2
        if u1 == v2 or u2 == v1:
            return None
        if v2 in self.nbrs[u1] or v1 in self.nbrs[u2]:
            return None
        return SwapProposal(i, j, u1, v1, u2, v2)

    def apply(self, p: SwapProposal) -> int:
        """Perform the swap and return the exact change in triangle count."""
        nb = self.nbrs
        dT = 0
        for a, b in p.removed:
            nb[a].discard(b)
            nb[b].discard(a)
            dT -= len(nb[a] & nb[b])
        for a, b in p.added:
            dT += len(nb[a] & nb[b])
            nb[a].add(b)
            nb[b].add(a)
        self.edges[p.i] = sorted((p.u1, p.v2))
        self.edges[p.j] = sorted((p.u2, p.v1))
        self.T += dT
        return dT

    def undo(self, p: SwapProposal, dT: int) -> None:
        nb = self.nbrs
        for a, b in p.added:
            nb[a].discard(b)
            nb[b].discard(a)
        for a, b in p.removed:
            nb[a].add(b)
            nb[b].add(a)
        self.edges[p.i] = sorted((p.u1, p.v1))
        self.edges[p.j] = sorted((p.u2, p.v2))
        self.T -= dT

    def to_graph(self) -> RegularGraph:
        return build_graph(self.n, self.d, self.edges)


def randomize_by_swaps(g: RegularGraph, rng: np.random.Generator, n_swaps: int) -> RegularGraph:
    """Apply ``n_swaps`` accepted uniform double-edge swaps to ``g``."""
    if g.num_edges < 2:
        return g
    state = SwapState(g)
    stream = RandomStream(rng, len(state.edges))
    done = 0
    attempts = 0
    limit = 100 * n_swaps + 1000
    while done < n_swaps and attempts < limit:
        attempts += 1
        i, j, flip, _ = stream.next()
        p = state.propose(i, j, flip)
        if p is not None:
            state.apply(p)
            done += 1
    return state.to_graph()
