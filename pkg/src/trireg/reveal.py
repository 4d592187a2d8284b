"""Configuration ordering, the triangle reveal profile and its behaviour under
random node relabelings."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .census import count_triangles, edge_triangle_table, t_max, threshold
from .errors import CapExceeded, ConstraintUnmet
from .graph import Edge, PortLabeledGraph, RegularGraph, attach_ports

EXACT_CAP = 9


@dataclass(frozen=True)
class RevealProfile:
    bits: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def __len__(self):
        return len(self.bits)

    def as_int(self) -> int:
        """Bit k of the integer is entry k of the profile."""
        return sum(1 << k for k, b in enumerate(self.bits) if b)

    def rle(self) -> list[list[int]]:
        return [[b, len(list(run))] for b, run in itertools.groupby(self.bits)]

    def to_dict(self) -> dict:
        return {"len": len(self.bits), "weight": self.weight, "rle": self.rle()}

    @classmethod
    def from_dict(cls, rec: dict) -> "RevealProfile":
        bits = tuple(b for b, k in rec["rle"] for _ in range(k))
        if len(bits) != rec["len"] or sum(bits) != rec["weight"]:
            raise ValueError("inconsistent profile record")
        return cls(bits)


def t_c(n: int, d: int, c) -> Fraction:
    """Reveal-weight threshold c * (dn/2) * (d-1)/(d+1), exact."""
    return Fraction(c) * Fraction(d * n, 2) * Fraction(d - 1, d + 1)


def configuration_order(gs: PortLabeledGraph) -> list[Edge]:
    """Edges sorted by smaller endpoint, ties broken by the port label there."""
    return sorted(gs.graph.edges(), key=lambda e: (e[0], gs.label(e[0], e[1])))


def encode_phi(gs: PortLabeledGraph) -> RevealProfile:
    g = gs.graph
    seen = [set() for _ in range(g.n)]
    bits = []
    for u, v in configuration_order(gs):
        bits.append(1 if seen[u] & seen[v] else 0)
        seen[u].add(v)
        seen[v].add(u)
    return RevealProfile(tuple(bits))


def phi_weight_fast(g: RegularGraph) -> int:
    """Edges (i, j) closing a triangle whose third node precedes both i and j."""
    nb = g.nbr_sets
    return sum(1 for u, v in g.edges() if any(h < u for h in nb[u] & nb[v]))


def expected_phi_exact(g: RegularGraph) -> Fraction:
    return sum((Fraction(t, t + 2) for t in edge_triangle_table(g).t.values()), Fraction(0))


# -- permutation sweeps ---------------------------------------------------------------


def _edge_witnesses(g: RegularGraph):
    nb = g.nbr_sets
    out = []
    for u, v in g.edges():
        third = sorted(nb[u] & nb[v])
        if third:
            out.append((u, v, third))
    return out


def phi_weights(g: RegularGraph, perms: np.ndarray) -> np.ndarray:
    """Reveal weight of ``g`` relabeled by each row of ``perms`` (``perms[r, i] = sigma(i)``).

    An edge reveals a triangle in the relabeled graph iff one of its third
    nodes gets a smaller new label than both endpoints.
    """
    perms = np.asarray(perms)
    w = np.zeros(perms.shape[0], dtype=np.int64)
    for u, v, third in _edge_witnesses(g):
        lo = np.minimum(perms[:, u], perms[:, v])
        w += perms[:, third].min(axis=1) < lo
    return w


def all_permutations(n: int, cap: int = EXACT_CAP) -> np.ndarray:
    if n > cap:
        raise CapExceeded(f"exact sweep over {n}! permutations exceeds cap n <= {cap}")
    dtype = np.int8 if n < 128 else np.int32
    return np.array(list(itertools.permutations(range(n))), dtype=dtype).reshape(-1, n)


_PERM_CACHE: dict[int, np.ndarray] = {}


def _perms(n: int, cap: int) -> np.ndarray:
    if n > cap:
        raise CapExceeded(f"exact sweep over {n}! permutations exceeds cap n <= {cap}")
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = all_permutations(n, cap=max(cap, n))
    return _PERM_CACHE[n]


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    samples: int
    seed: int


def _sample_perms(n: int, mc: MonteCarlo) -> np.ndarray:
    rng = np.random.default_rng(mc.seed)
    return rng.permuted(np.tile(np.arange(n), (mc.samples, 1)), axis=1)


def mean_phi_over_permutations(g: RegularGraph, mode="exact", cap: int = EXACT_CAP):
    """Mean reveal weight over node relabelings.

    ``mode="exact"`` sums over all n! permutations and returns a Fraction;
    a :class:`MonteCarlo` mode returns an :class:`Estimate`.
    """
    if isinstance(mode, MonteCarlo):
        w = phi_weights(g, _sample_perms(g.n, mode)).astype(float)
        se = float(w.std(ddof=1) / math.sqrt(len(w))) if len(w) > 1 else float("nan")
        return Estimate(float(w.mean()), se, mode.samples, mode.seed)
    w = phi_weights(g, _perms(g.n, cap))
    return Fraction(int(w.sum()), math.factorial(g.n))


def reveal_threshold(n: int, d: int, c) -> int:
    """Integer form of ``|x| >= T_c - 1``."""
    return threshold(t_c(n, d, c) - 1)


def orbit_lower_bound(n: int, d: int) -> Fraction:
    return Fraction(2, d * n)


def permutation_success_fraction(g: RegularGraph, c, mode="exact", cap: int = EXACT_CAP):
    """Fraction of relabelings whose reveal weight reaches ``T_c - 1``."""
    c = Fraction(c)
    need = threshold(c * t_max(g.n, g.d))
    T = count_triangles(g)
    if T < need:
        raise ConstraintUnmet(f"T(g) = {T} < ceil(c*T_max) = {need}")
    thr = reveal_threshold(g.n, g.d, c)
    if isinstance(mode, MonteCarlo):
        hits = (phi_weights(g, _sample_perms(g.n, mode)) >= thr).astype(float)
        p = float(hits.mean())
        return Estimate(p, math.sqrt(p * (1 - p) / mode.samples), mode.samples, mode.seed)
    w = phi_weights(g, _perms(g.n, cap))
    return Fraction(int((w >= thr).sum()), math.factorial(g.n))


def profile_report(g: RegularGraph, ports=None) -> dict:
    gs = ports if isinstance(ports, PortLabeledGraph) else attach_ports(g, ports)
    prof = encode_phi(gs)
    return {
        "n": g.n,
        "d": g.d,
        "profile": prof.to_dict(),
        "phi_weight_fast": phi_weight_fast(g),
        "expected_phi": str(expected_phi_exact(g)),
    }
