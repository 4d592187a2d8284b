"""Double-edge-swap Markov chains tilted towards triangles.

The chain anneals an inverse temperature upward until the triangle count
reaches ``ceil(c * T_max)``, then runs at beta = 0 restricted to that set.
Nothing here is a mixing guarantee; connectivity of the restricted chain is
an empirical assumption and the traces exist to expose it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ._swap import RandomStream, SwapProposal, SwapState
from .census import count_triangles, t_max, threshold
from .errors import InfeasibleSpec, Timeout
from .generators import PlantedSpec, plant_family, random_regular_graph
from .graph import RegularGraph, format_edgelist


def chain_rng(seed: int, chain_id: int = 0) -> np.random.Generator:
    """Independent, reproducible stream for chain ``chain_id`` of run ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(chain_id)])))


def default_schedule(n: int, d: int, stages: int = 10) -> list[tuple[float, int]]:
    """Beta from 0 to 2 log n, doubling increments, n*d*100 steps per stage."""
    top = 2 * math.log(n)
    steps = n * d * 100
    denom = 2 ** (stages - 1) - 1
    return [(top * (2**k - 1) / denom, steps) for k in range(stages)]


@dataclass
class ChainConfig:
    n: int
    d: int
    c: Fraction | float = 0
    beta_schedule: list[tuple[float, int]] | None = None
    seed: int = 0
    max_steps: int | None = None
    record_every: int = 100
    burn_in: int | None = None
    chain_id: int = 0
    start: str = "random"

    def __post_init__(self):
        self.c = Fraction(self.c) if not isinstance(self.c, float) else Fraction(repr(self.c))
        if not 0 <= self.c <= 1:
            raise InfeasibleSpec(f"c = {self.c} outside [0, 1]")
        if self.beta_schedule is None:
            self.beta_schedule = default_schedule(self.n, self.d)
        self.beta_schedule = [(float(b), int(s)) for b, s in self.beta_schedule]
        if not self.beta_schedule:
            raise ValueError("beta_schedule must be non-empty")
        if any(s <= 0 for _, s in self.beta_schedule):
            raise ValueError("schedule step counts must be positive")
        if self.burn_in is None:
            self.burn_in = self.n * self.d * 100
        if self.max_steps is None:
            self.max_steps = 2 * sum(s for _, s in self.beta_schedule) + self.burn_in
        if self.record_every <= 0 or self.burn_in < 0 or self.max_steps <= 0:
            raise ValueError("record_every and max_steps must be positive, burn_in non-negative")
        if self.start not in ("random", "planted"):
            raise ValueError("start must be 'random' or 'planted'")

    @property
    def threshold(self) -> int:
        return threshold(self.c * t_max(self.n, self.d))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["c"] = str(self.c)
        out["beta_schedule"] = [list(x) for x in self.beta_schedule]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ChainConfig":
        rec = json.loads(text)
        rec["c"] = Fraction(rec["c"])
        rec["beta_schedule"] = [tuple(x) for x in rec["beta_schedule"]]
        return cls(**rec)


@dataclass
class ChainTrace:
    seed: int
    chain_id: int
    threshold: int
    steps: list[int] = field(default_factory=list)
    triangles: list[int] = field(default_factory=list)
    acceptance: list[float] = field(default_factory=list)
    betas: list[float] = field(default_factory=list)
    phases: list[str] = field(default_factory=list)
    proposals: int = 0
    invalid: int = 0
    accepted: int = 0
    reached_at: int | None = None
    recount_checks: int = 0
    final_graph: RegularGraph | None = None

    def record(self, step: int, T: int, acc: float, beta: float, phase: str) -> None:
        self.steps.append(step)
        self.triangles.append(T)
        self.acceptance.append(acc)
        self.betas.append(beta)
        self.phases.append(phase)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "chain_id": self.chain_id,
            "threshold": self.threshold,
            "proposals": self.proposals,
            "invalid": self.invalid,
            "accepted": self.accepted,
            "reached_at": self.reached_at,
            "recount_checks": self.recount_checks,
            "records": [
                {"step": s, "T": t, "acceptance": round(a, 12), "beta": round(b, 12), "phase": p}
                for s, t, a, b, p in zip(self.steps, self.triangles, self.acceptance, self.betas, self.phases)
            ],
            "final_graph": None if self.final_graph is None else format_edgelist(self.final_graph),
            "status": "empirical",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "T", "acceptance", "beta", "phase"])
        for s, t, a, b, p in zip(self.steps, self.triangles, self.acceptance, self.betas, self.phases):
            w.writerow([s, t, f"{a:.12g}", f"{b:.12g}", p])
        return buf.getvalue()


def double_edge_swap(g: RegularGraph, rng: np.random.Generator) -> SwapProposal | None:
    """A uniformly chosen swap proposal on ``g``; None when it would break simplicity."""
    m = g.num_edges
    if m < 2:
        return None
    i, j = (int(x) for x in rng.integers(0, m, size=2))
    return SwapState(g).propose(i, j, int(rng.integers(0, 2)))


def metropolis_step(g: RegularGraph, beta: float, rng: np.random.Generator) -> RegularGraph:
    """One tilted step: accept with probability min(1, exp(beta * dT))."""
    state = SwapState(g)
    if len(state.edges) < 2:
        return g
    i, j = (int(x) for x in rng.integers(0, len(state.edges), size=2))
    p = state.propose(i, j, int(rng.integers(0, 2)))
    if p is None:
        return g
    dT = state.apply(p)
    if dT < 0 and rng.random() >= math.exp(beta * dT):
        return g
    return state.to_graph()


class _Chain:
    def __init__(self, g: RegularGraph, rng: np.random.Generator, trace: ChainTrace):
        self.state = SwapState(g)
        self.stream = RandomStream(rng, len(self.state.edges))
        self.trace = trace
        self.step_no = 0
        self.window_prop = 0
        self.window_acc = 0

    def step(self, beta: float, floor: int | None = None) -> None:
        st = self.state
        self.step_no += 1
        self.trace.proposals += 1
        self.window_prop += 1
        if len(st.edges) < 2:
            return
        i, j, flip, u = self.stream.next()
        p = st.propose(i, j, flip)
        if p is None:
            self.trace.invalid += 1
            return
        dT = st.apply(p)
        if floor is not None and st.T < floor:
            st.undo(p, dT)
            return
        if dT < 0 and u >= math.exp(beta * dT):
            st.undo(p, dT)
            return
        self.trace.accepted += 1
        self.window_acc += 1

    def checkpoint(self, beta: float, phase: str, floor: int | None = None) -> None:
        g = self.state.to_graph()  # validates regularity and simplicity
        if count_triangles(g) != self.state.T:
            raise AssertionError("incremental triangle count drifted from recount")
        if floor is not None and self.state.T < floor:
            raise AssertionError("constrained phase left the constraint set")
        self.trace.recount_checks += 1
        acc = self.window_acc / self.window_prop if self.window_prop else 0.0
        self.trace.record(self.step_no, self.state.T, acc, beta, phase)
        self.window_prop = self.window_acc = 0


def _start_graph(cfg: ChainConfig, rng: np.random.Generator) -> RegularGraph:
    if cfg.start == "planted":
        return plant_family(PlantedSpec.build(cfg.n, cfg.d, cfg.c), rng)
    return random_regular_graph(cfg.n, cfg.d, rng)


def sample_conditioned(cfg: ChainConfig, start: RegularGraph | None = None) -> tuple[RegularGraph, ChainTrace]:
    """Anneal until T >= ceil(c T_max), then ``burn_in`` restricted steps at beta = 0.

    Raises :class:`Timeout` (carrying the trace) if the constraint is not met
    within ``max_steps`` annealing steps.
    """
    rng = chain_rng(cfg.seed, cfg.chain_id)
    g0 = start if start is not None else _start_graph(cfg, rng)
    thr = cfg.threshold
    trace = ChainTrace(cfg.seed, cfg.chain_id, thr)
    ch = _Chain(g0, rng, trace)
    every = cfg.record_every

    beta = cfg.beta_schedule[0][0]
    if ch.state.T < thr:
        stages = list(cfg.beta_schedule)
        k = 0
        left = stages[0][1]
        while ch.state.T < thr:
            if ch.step_no >= cfg.max_steps:
                ch.checkpoint(beta, "anneal")
                trace.final_graph = ch.state.to_graph()
                raise Timeout(f"T = {ch.state.T} < {thr} after {ch.step_no} steps", trace)
            if left == 0 and k + 1 < len(stages):
                k += 1
                left = stages[k][1]
            beta = stages[k][0]
            ch.step(beta)
            left = max(left - 1, 0)
            if ch.step_no % every == 0:
                ch.checkpoint(beta, "anneal")
    trace.reached_at = ch.step_no
    ch.checkpoint(beta, "reached")
    for s in range(cfg.burn_in):
        ch.step(0.0, floor=thr)
        if (s + 1) % every == 0:
            ch.checkpoint(0.0, "constrained", floor=thr)
    trace.final_graph = ch.state.to_graph()
    return trace.final_graph, trace


def run_chains(cfg: ChainConfig, starts=("random", "planted")) -> dict:
    """Independent chains from different start types; reports their final
    triangle counts side by side instead of asserting agreement."""
    out = []
    for idx, kind in enumerate(starts):
        sub = ChainConfig(**{**cfg.__dict__, "start": kind, "chain_id": cfg.chain_id + idx})
        try:
            g, trace = sample_conditioned(sub)
            out.append({"start": kind, "chain_id": sub.chain_id, "final_T": count_triangles(g), "status": "ok"})
        except (Timeout, InfeasibleSpec) as exc:
            out.append({"start": kind, "chain_id": sub.chain_id, "final_T": None, "status": str(exc)})
    finals = [r["final_T"] for r in out if r["final_T"] is not None]
    spread = max(finals) - min(finals) if finals else None
    return {"chains": out, "final_T_spread": spread, "status": "empirical"}


@dataclass(frozen=True)
class FrequencyEstimate:
    frequency: float
    stderr: float
    samples: int
    thin: int
    batches: int


def batch_means_stderr(x: np.ndarray, batches: int = 50) -> float:
    x = np.asarray(x, dtype=float)
    nb = min(batches, len(x))
    if nb < 2:
        return float("nan")
    size = len(x) // nb
    means = x[: nb * size].reshape(nb, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(nb))


def triangle_frequency(
    n: int, d: int, target: int, samples: int, thin: int = 10, seed: int = 0, burn_in: int = 1000, batches: int = 50
) -> FrequencyEstimate:
    """Long-run fraction of time the uniform swap chain sits at T == target."""
    rng = chain_rng(seed)
    trace = ChainTrace(seed, 0, 0)
    ch = _Chain(random_regular_graph(n, d, rng), rng, trace)
    for _ in range(burn_in):
        ch.step(0.0)
    hits = np.empty(samples, dtype=np.int8)
    for k in range(samples):
        for _ in range(thin):
            ch.step(0.0)
        hits[k] = ch.state.T == target
    return FrequencyEstimate(float(hits.mean()), batch_means_stderr(hits, batches), samples, thin, batches)
