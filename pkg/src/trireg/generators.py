"""Random d-regular graphs and planted triangle-rich families."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from math import comb

import numpy as np

from ._swap import randomize_by_swaps
from .census import t_max, threshold
from .errors import DegreeViolation, InfeasibleSpec, ParityViolation, RejectionBudgetExceeded
from .graph import RegularGraph, build_graph, complete_graph, matched_complement


class BlockKind(str, Enum):
    CLIQUE = "CLIQUE"
    MATCHED_COMPLEMENT = "MATCHED_COMPLEMENT"


def block_size(d: int, kind: BlockKind) -> int:
    return d + 1 if kind is BlockKind.CLIQUE else d + 2


def block_triangles(d: int, kind: BlockKind) -> int:
    """Triangles inside one block: C(d+1,3) for K_{d+1}; for K_{d+2} minus a
    perfect matching, every triple avoiding the (d+2)/2 matched pairs."""
    if kind is BlockKind.CLIQUE:
        return comb(d + 1, 3)
    return comb(d + 2, 3) - (d + 2) // 2 * d


def blocks_needed(n: int, d: int, c, kind: BlockKind) -> int:
    c = Fraction(c)
    if kind is BlockKind.CLIQUE:
        return threshold(c * n / (d + 1))
    per = block_triangles(d, kind)
    if per == 0:
        raise InfeasibleSpec(f"a {kind.value} block has no triangles at d={d}")
    return threshold(c * t_max(n, d) / per)


@dataclass(frozen=True)
class PlantedSpec:
    n: int
    d: int
    c: Fraction
    b: int
    m: int
    block_kind: BlockKind = BlockKind.CLIQUE

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "block_kind", BlockKind(self.block_kind))
        kind, n, d, b, m = self.block_kind, self.n, self.d, self.b, self.m
        if kind is BlockKind.MATCHED_COMPLEMENT:
            if d % 2:
                raise ParityViolation(f"K_{d + 2} minus a perfect matching needs d even, got d={d}")
            if d < 2:
                raise InfeasibleSpec("matched-complement blocks need d >= 2")
        if b < 0 or b * block_size(d, kind) + m != n:
            raise InfeasibleSpec(f"b*{block_size(d, kind)} + m = {b * block_size(d, kind) + m} != n = {n}")
        if b != blocks_needed(n, d, self.c, kind):
            raise InfeasibleSpec(f"b={b} does not match ceil rule {blocks_needed(n, d, self.c, kind)}")
        if m != 0 and (m < d + 1 or (d * m) % 2):
            raise InfeasibleSpec(f"no d-regular residual on m={m} nodes for d={d} (need m >= d+1, dm even)")

    @classmethod
    def build(cls, n: int, d: int, c, block_kind=BlockKind.CLIQUE) -> "PlantedSpec":
        kind = BlockKind(block_kind)
        b = blocks_needed(n, d, c, kind)
        return cls(n, d, Fraction(c), b, n - b * block_size(d, kind), kind)

    @classmethod
    def for_blocks(cls, n: int, d: int, b: int, block_kind=BlockKind.CLIQUE) -> "PlantedSpec":
        """Spec with exactly ``b`` blocks, using the largest c the ceiling rule maps to b."""
        kind = BlockKind(block_kind)
        if kind is BlockKind.CLIQUE:
            c = Fraction(b * (d + 1), n)
        else:
            c = Fraction(b * block_triangles(d, kind)) / t_max(n, d)
        return cls(n, d, min(c, Fraction(1)), b, n - b * block_size(d, kind), kind)

    def to_json(self) -> str:
        rec = asdict(self)
        rec["c"] = str(self.c)
        rec["block_kind"] = self.block_kind.value
        return json.dumps(rec, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PlantedSpec":
        rec = json.loads(text)
        return cls(rec["n"], rec["d"], Fraction(rec["c"]), rec["b"], rec["m"], rec["block_kind"])


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_configuration_model(n: int, d: int, seed, max_tries: int = 1000) -> RegularGraph:
    """Uniform simple d-regular graph by rejection from uniform pairings of half-edges."""
    if not 0 <= d < n:
        raise DegreeViolation(f"need 0 <= d < n, got d={d}, n={n}")
    if (d * n) % 2:
        raise ParityViolation(f"d*n = {d * n} is odd")
    rng = _rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        u = pairs.min(axis=1)
        v = pairs.max(axis=1)
        if np.any(u == v):
            continue
        keys = u.astype(np.int64) * n + v
        if np.unique(keys).size != keys.size:
            continue
        return build_graph(n, d, zip(u.tolist(), v.tolist()))
    raise RejectionBudgetExceeded(f"no simple pairing in {max_tries} tries at n={n}, d={d}")


def circulant_regular(n: int, d: int) -> RegularGraph:
    """Deterministic d-regular circulant: offsets 1..d/2, plus n/2 when d is odd."""
    if (d * n) % 2 or not 0 <= d < n:
        raise InfeasibleSpec(f"no d-regular graph with n={n}, d={d}")
    offsets = list(range(1, d // 2 + 1))
    edges = {tuple(sorted((i, (i + s) % n))) for i in range(n) for s in offsets}
    if d % 2:
        edges |= {(i, i + n // 2) for i in range(n // 2)}
    return build_graph(n, d, sorted(edges))


def random_regular_graph(n: int, d: int, seed, max_tries: int = 200) -> RegularGraph:
    """Configuration-model sample, or a swap-randomized circulant when rejection
    is hopeless. The fallback is regular and simple but not exactly uniform."""
    rng = _rng(seed)
    # acceptance probability of the pairing is about exp(-(d^2-1)/4)
    if (d * d - 1) / 4 < 12:
        try:
            return sample_configuration_model(n, d, rng, max_tries=max_tries)
        except RejectionBudgetExceeded:
            pass
    g = circulant_regular(n, d)
    return randomize_by_swaps(g, rng, 10 * g.num_edges)


def _plant(spec: PlantedSpec, block: RegularGraph, seed) -> RegularGraph:
    edges = []
    size = block.n
    for k in range(spec.b):
        off = k * size
        edges.extend((u + off, v + off) for u, v in block.edges())
    if spec.m:
        rest = random_regular_graph(spec.m, spec.d, seed)
        off = spec.b * size
        edges.extend((u + off, v + off) for u, v in rest.edges())
    return build_graph(spec.n, spec.d, edges)


def plant_clique_family(spec: PlantedSpec, seed) -> RegularGraph:
    """``b`` disjoint K_{d+1} on nodes ``0..b(d+1)-1`` plus a random d-regular residual."""
    if spec.block_kind is not BlockKind.CLIQUE:
        raise InfeasibleSpec("spec is not a CLIQUE spec")
    return _plant(spec, complete_graph(spec.d + 1), seed)


def plant_matched_complement_family(spec: PlantedSpec, seed) -> RegularGraph:
    """``b`` disjoint copies of K_{d+2} minus a perfect matching plus a random residual."""
    if spec.block_kind is not BlockKind.MATCHED_COMPLEMENT:
        raise InfeasibleSpec("spec is not a MATCHED_COMPLEMENT spec")
    return _plant(spec, matched_complement(spec.d), seed)


def plant_family(spec: PlantedSpec, seed) -> RegularGraph:
    if spec.block_kind is BlockKind.CLIQUE:
        return plant_clique_family(spec, seed)
    return plant_matched_complement_family(spec, seed)


def planted_blocks(spec: PlantedSpec) -> list[frozenset[int]]:
    size = block_size(spec.d, spec.block_kind)
    return [frozenset(range(k * size, (k + 1) * size)) for k in range(spec.b)]


def random_permutation(n: int, seed) -> tuple[int, ...]:
    return tuple(int(x) for x in _rng(seed).permutation(n))

