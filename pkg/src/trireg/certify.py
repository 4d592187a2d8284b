"""The ten acceptance checks as plain functions.

Each returns a :class:`CriterionResult` whose ``detail`` is deterministic
(no timings), so two runs produce byte-identical artifacts. ``suite="core"``
shrinks the grids for a quick smoke run; ``"full"`` uses the stated sizes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .bounds import explicit_upper_count, lower_count, phi_preimage_bound
from .census import count_cliques_within, count_k_cliques, count_triangles, edge_triangle_table, t_k_max, t_max, threshold
from .enumeration import (
    count_regular_graphs,
    enumerate_regular_graphs,
    exact_conditioned_count,
    sweep_pairings,
)
from .errors import InfeasibleSpec, Timeout
from .generators import BlockKind, PlantedSpec, plant_family, planted_blocks, random_regular_graph
from .graph import attach_ports, random_ports
from .reveal import (
    encode_phi,
    expected_phi_exact,
    mean_phi_over_permutations,
    orbit_lower_bound,
    permutation_success_fraction,
    phi_weight_fast,
)
from .sampler import ChainConfig, chain_rng, sample_conditioned, triangle_frequency
from .structure import assemble_pseudo_cliques, find_d_plus_1_cliques, structure_report

SUITES = ("core", "full")


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2} {self.name}"

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed, "detail": self.detail}


def _full(suite: str) -> bool:
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {SUITES}")
    return suite == "full"


def criterion_1(suite: str = "full") -> CriterionResult:
    """Exact permutation mean of the reveal weight equals sum t_e/(t_e+2)."""
    graphs = []
    for n, d in [(6, 2), (4, 3), (6, 3)]:
        graphs += [(f"({n},{d})", g) for g in enumerate_regular_graphs(n, d)]
    seeds = range(20 if _full(suite) else 3)
    graphs += [(f"(8,3) seed {s}", random_regular_graph(8, 3, s)) for s in seeds]
    bad = []
    for tag, g in graphs:
        if mean_phi_over_permutations(g) != expected_phi_exact(g):
            bad.append(tag)
    return CriterionResult(1, "permutation-mean identity", not bad, {"graphs": len(graphs), "mismatches": bad})


def criterion_2(suite: str = "full") -> CriterionResult:
    """Every constrained graph has relabeling success fraction >= 2/(dn)."""
    cases = [(6, 2, Fraction(1))]
    cs = [Fraction(1, 4), Fraction(1, 2), Fraction(1)] if _full(suite) else [Fraction(1)]
    cases += [(8, 3, c) for c in cs]
    rows = []
    ok = True
    for n, d, c in cases:
        need = threshold(c * t_max(n, d))
        floor = orbit_lower_bound(n, d)
        worst = None
        checked = 0
        for g in enumerate_regular_graphs(n, d):
            if count_triangles(g) < need:
                continue
            frac = permutation_success_fraction(g, c)
            checked += 1
            worst = frac if worst is None or frac < worst else worst
        good = worst is not None and worst >= floor
        ok &= good
        rows.append({"n": n, "d": d, "c": str(c), "graphs": checked, "min_fraction": str(worst), "bound": str(floor)})
    return CriterionResult(2, "orbit bound", ok, {"cases": rows})


def criterion_3(suite: str = "full", seed: int = 3) -> CriterionResult:
    """Configuration-order weight equals the third-node shortcut on random labeled graphs."""
    rng = chain_rng(seed)
    trials = 1000 if _full(suite) else 100
    mismatches = 0
    for _ in range(trials):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(d + 1, 31))
        if (n * d) % 2:
            n += 1 if n < 30 else -1
        g = random_regular_graph(n, d, rng)
        gs = random_ports(g, rng)
        if encode_phi(gs).weight != phi_weight_fast(g):
            mismatches += 1
    return CriterionResult(3, "profile equivalence", mismatches == 0, {"trials": trials, "mismatches": mismatches, "seed": seed})


def criterion_4(suite: str = "full") -> CriterionResult:
    """Pointwise preimage bound over full pairing sweeps."""
    cases = [(4, 3), (6, 2), (5, 2)] + ([(6, 3)] if _full(suite) else [])
    rows = []
    ok = True
    for n, d in cases:
        res = sweep_pairings(n, d)
        worst = Fraction(0)
        good = True
        for key, cnt in res.phi_histogram.items():
            w = bin(key).count("1")
            bound = phi_preimage_bound(n, d, w)
            good &= cnt <= bound
            worst = max(worst, Fraction(cnt) / bound)
        ok &= good and res.total_pairings == factorial(n * d) // (2 ** (n * d // 2) * factorial(n * d // 2))
        rows.append(
            {
                "n": n,
                "d": d,
                "pairings": res.total_pairings,
                "simple_pairings": res.simple_pairings,
                "profiles": len(res.phi_histogram),
                "max_ratio": f"{float(worst):.6e}",
            }
        )
    return CriterionResult(4, "preimage bound", ok, {"cases": rows})


SANDWICH_CS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1)]


def sandwich_grid(full: bool = True):
    out = []
    for d in range(1, 5):
        for n in range(d + 1, 19 // d + 1):
            if d * d <= n and (d * n) % 2 == 0 and d * n <= 18:
                out += [(n, d, c) for c in (SANDWICH_CS if full else SANDWICH_CS[::3])]
    return out


def criterion_5(suite: str = "full") -> CriterionResult:
    """lower <= exact <= upper on exact rationals."""
    rows = []
    ok = True
    for n, d, c in sandwich_grid(_full(suite)):
        exact = exact_conditioned_count(n, d, c)
        upper = explicit_upper_count(n, d, c)
        try:
            lower = lower_count(n, d, c)
        except InfeasibleSpec:
            lower = None
        good = exact <= upper and (lower is None or lower <= exact)
        ok &= good
        rows.append({"n": n, "d": d, "c": str(c), "lower": lower, "exact": exact, "upper_ge_exact": exact <= upper, "ok": good})
    headline = exact_conditioned_count(6, 2, 1) == 10 and lower_count(6, 2, 1) == 10
    return CriterionResult(5, "counting sandwich", ok and headline, {"headline_6_2_1": headline, "cases": rows})


def planted_grid(full: bool = True):
    ds = [3, 4, 5, 20] if full else [3, 4]
    cs = [Fraction(1, 4), Fraction(1, 2), Fraction(1)]
    return [(10 * (d + 1), d, c) for d in ds for c in cs]


def criterion_6(suite: str = "full", seed: int = 6) -> CriterionResult:
    """Planted K_{d+1} families meet the triangle and k-clique thresholds exactly as computed."""
    rows = []
    ok = True
    for n, d, c in planted_grid(_full(suite)):
        spec = PlantedSpec.build(n, d, c)
        g = plant_family(spec, seed)
        T = count_triangles(g)
        good = T >= threshold(c * t_max(n, d))
        blocks = planted_blocks(spec)
        for k in (3, 4, 5):
            if k > d + 1:
                continue
            planted = sum(count_cliques_within(g, b, k) for b in blocks)
            good &= planted == spec.b * comb(d + 1, k)
            good &= spec.b * comb(d + 1, k) >= c * t_k_max(n, d, k)
            if d <= 5:
                good &= count_k_cliques(g, k) >= planted
        ok &= good
        rows.append({"n": n, "d": d, "c": str(c), "b": spec.b, "T": T, "ok": good})
    return CriterionResult(6, "planted-family guarantees", ok, {"seed": seed, "cases": rows})


def criterion_7(suite: str = "full", seeds=None) -> CriterionResult:
    """Pseudo-clique recovery on planted instances; K_4 recovery in fixed-d mode."""
    seeds = list(seeds) if seeds is not None else ([1, 2, 3] if _full(suite) else [1])
    rows = []
    ok = True
    for kind in BlockKind:
        spec = PlantedSpec.for_blocks(210, 20, 5, kind)
        for s in seeds:
            g = plant_family(spec, s)
            rep = assemble_pseudo_cliques(g, Fraction(1, 20))
            found = sorted(sorted(b) for b in rep.blocks)
            want = sorted(sorted(b) for b in planted_blocks(spec))
            good = found == want and all(v is not False for v in rep.checks.values())
            ok &= good
            rows.append({"kind": kind.value, "seed": s, "pseudo_cliques": len(rep.blocks), "checks": rep.checks, "ok": good})
    spec = PlantedSpec.for_blocks(20, 3, 3)
    for s in seeds:
        g = plant_family(spec, s)
        cl = find_d_plus_1_cliques(g)
        good = sorted(sorted(b) for b in cl) == sorted(sorted(b) for b in planted_blocks(spec))
        ok &= good
        rows.append({"kind": "FIXED_D K4", "seed": s, "cliques": len(cl), "ok": good})
    return CriterionResult(7, "structure recovery", ok, {"cases": rows})


def criterion_8(suite: str = "full", seed: int = 8) -> CriterionResult:
    """Swap-chain calibration at (6,2) and a conditioned run at (60,3,1/2)."""
    samples = 100_000 if _full(suite) else 20_000
    exact = count_regular_graphs(6, 2)
    p_true = Fraction(10, exact)
    est = triangle_frequency(6, 2, 2, samples, thin=5, seed=seed)
    z = abs(est.frequency - float(p_true)) / est.stderr
    calibrated = z <= 3
    conditioned = {}
    try:
        g, trace = sample_conditioned(ChainConfig(60, 3, Fraction(1, 2), seed=seed))
        rep = structure_report(g, Fraction(1, 2))
        in_set = count_triangles(g) >= threshold(Fraction(1, 2) * t_max(60, 3))
        conditioned = {
            "T": count_triangles(g),
            "in_constraint_set": in_set,
            "reached_at": trace.reached_at,
            "bad_node_fraction": rep.thresholds["bad_node_fraction"],
            "eps_n": rep.thresholds["eps_n"],
            "below_eps_n": rep.thresholds["below_eps_n"],
            "note": "empirical observation, not a gate",
        }
    except Timeout as exc:
        in_set = False
        conditioned = {"timeout": str(exc)}
    detail = {
        "seed": seed,
        "samples": samples,
        "thin": est.thin,
        "frequency": round(est.frequency, 10),
        "stderr": round(est.stderr, 10),
        "target": str(p_true),
        "z": round(z, 6),
        "conditioned": conditioned,
    }
    return CriterionResult(8, "sampler calibration", calibrated and in_set, detail)


def criterion_9(suite: str = "full") -> CriterionResult:
    """A node whose edges all have t_e = d-1 lies in a K_{d+1}."""
    cases = [(6, 3), (8, 3)] if _full(suite) else [(6, 3)]
    rows = []
    ok = True
    for n, d in cases:
        graphs = violations = saturated = 0
        for g in enumerate_regular_graphs(n, d):
            graphs += 1
            t = edge_triangle_table(g).t
            nb = g.nbr_sets
            for v in range(n):
                if all(t[(min(v, w), max(v, w))] == d - 1 for w in nb[v]):
                    saturated += 1
                    block = nb[v] | {v}
                    if not all(block <= nb[x] | {x} for x in nb[v]):
                        violations += 1
        ok &= violations == 0
        rows.append({"n": n, "d": d, "graphs": graphs, "saturated_nodes": saturated, "violations": violations})
    return CriterionResult(9, "saturated nodes lie in K_{d+1}", ok, {"cases": rows})


def criterion_10(suite: str = "full") -> CriterionResult:
    """Two identical CLI runs give byte-identical artifact directories."""
    import tempfile
    from pathlib import Path

    from .cli import main

    runs = [
        ["generate", "--n", "20", "--d", "3", "--c", "0.5", "--kind", "clique", "--seed", "5"],
        ["sample", "--n", "12", "--d", "3", "--c", "0.5", "--seed", "5"],
        ["bounds", "--n", "9", "--d", "3", "--c", "0.5"],
        ["enumerate", "--n", "6", "--d", "2", "--c", "1"],
        ["certify", "--suite", "core"] + [x for k in range(1, 10) for x in ("--only", str(k))],
    ]
    same = True
    files = 0
    with tempfile.TemporaryDirectory() as tmp:
        for k, argv in enumerate(runs):
            digests = []
            for rep in range(2):
                out = Path(tmp) / f"{k}-{rep}"
                code = main(argv + ["--output", str(out)], stdout=_Null())
                if code != 0:
                    same = False
                digests.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
            files += len(digests[0])
            same &= digests[0] == digests[1] and bool(digests[0])
    return CriterionResult(10, "determinism", same, {"runs": len(runs), "files": files})


class _Null:
    def write(self, s):
        return len(s)

    def flush(self):
        pass


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_suite(suite: str = "full", only=None) -> list[CriterionResult]:
    numbers = sorted(only) if only else sorted(CRITERIA)
    return [CRITERIA[k](suite) for k in numbers]


def results_json(results: list[CriterionResult]) -> str:
    return json.dumps([r.to_dict() for r in results], sort_keys=True, indent=1)


def results_table(results: list[CriterionResult]) -> str:
    return "\n".join(r.line() for r in results) + "\n"
