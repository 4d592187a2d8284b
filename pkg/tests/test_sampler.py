import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import regular_graphs
from trireg._swap import SwapState
from trireg.census import count_triangles, t_max, threshold
from trireg.errors import InfeasibleSpec, Timeout
from trireg.graph import build_graph, complete_graph, cycle_graph
from trireg.sampler import (
    ChainConfig,
    ChainTrace,
    batch_means_stderr,
    chain_rng,
    default_schedule,
    double_edge_swap,
    metropolis_step,
    run_chains,
    sample_conditioned,
    triangle_frequency,
)


def test_swap_on_c6():
    st_ = SwapState(cycle_graph(6))
    i = st_.edges.index([0, 1])
    j = st_.edges.index([3, 4])
    p = st_.propose(i, j, 0)
    assert p.added == ((0, 4), (3, 1))
    assert st_.propose(i, j, 1).added == ((0, 3), (4, 1))
    dT = st_.apply(p)
    # the rewired hexagon is two triangles
    assert dT == 2 and st_.to_graph().has_edge(0, 4) and st_.to_graph().has_edge(1, 3)


def test_swap_rejects_loops_and_repeats():
    st_ = SwapState(cycle_graph(6))
    i, j = st_.edges.index([0, 1]), st_.edges.index([1, 2])
    assert st_.propose(i, j, 1) is None  # shared node: (1,1) would be a loop
    assert st_.propose(i, i, 0) is None
    k4 = SwapState(complete_graph(4))
    assert all(k4.propose(a, b, f) is None for a in range(6) for b in range(6) for f in (0, 1))


@given(regular_graphs(max_n=14), st.integers(0, 2**32 - 1))
def test_swap_keeps_degrees(g, seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        p = double_edge_swap(g, rng)
        if p is not None:
            st_ = SwapState(g)
            st_.apply(p)
            g = st_.to_graph()
    assert all(len(a) == g.d for a in g.adj)


def test_local_delta_matches_recount():
    rng = np.random.default_rng(5)
    g = build_graph(12, 3, [(i, j) for b in range(3) for i in range(4 * b, 4 * b + 4) for j in range(i + 1, 4 * b + 4)])
    st_ = SwapState(g)
    checked = 0
    for _ in range(1000):
        i, j = (int(x) for x in rng.integers(0, len(st_.edges), size=2))
        p = st_.propose(i, j, int(rng.integers(0, 2)))
        if p is None:
            continue
        before = count_triangles(st_.to_graph())
        dT = st_.apply(p)
        assert dT == count_triangles(st_.to_graph()) - before
        checked += 1
        if rng.random() < 0.5:
            st_.undo(p, dT)
            assert count_triangles(st_.to_graph()) == before
    assert checked > 300


def test_metropolis_limits():
    g = build_graph(8, 3, [(i, j) for b in (0, 4) for i in range(b, b + 4) for j in range(i + 1, b + 4)])
    rng = np.random.default_rng(0)
    # every valid swap out of K4+K4 loses triangles; a huge beta rejects them all
    assert all(metropolis_step(g, 1e9, rng) == g for _ in range(200))
    moved = sum(metropolis_step(g, 0.0, rng) != g for _ in range(200))
    assert moved > 0
    rng = np.random.default_rng(1)
    for _ in range(200):
        p = double_edge_swap(g, rng)
        if p is not None:
            break
    assert p is not None


def test_config_validation():
    with pytest.raises(ValueError):
        ChainConfig(8, 3, 0, beta_schedule=[])
    with pytest.raises(ValueError):
        ChainConfig(8, 3, 0, beta_schedule=[(1.0, 0)])
    with pytest.raises(InfeasibleSpec):
        ChainConfig(8, 3, Fraction(3, 2))
    cfg = ChainConfig(12, 3, 0.25, seed=4)
    assert cfg.c == Fraction(1, 4) and cfg.threshold == 3
    assert ChainConfig.from_json(cfg.to_json()) == cfg


def test_default_schedule():
    s = default_schedule(20, 3)
    assert len(s) == 10 and s[0][0] == 0 and math.isclose(s[-1][0], 2 * math.log(20))
    assert all(steps == 6000 for _, steps in s)
    assert all(b1 < b2 for (b1, _), (b2, _) in zip(s, s[1:]))


@pytest.mark.parametrize("n,d,c", [(12, 3, Fraction(1, 4)), (8, 3, Fraction(1)), (20, 4, Fraction(1, 2))])
def test_conditioned_runs_reach_constraint(n, d, c):
    g, trace = sample_conditioned(ChainConfig(n, d, c, seed=11, record_every=50))
    assert count_triangles(g) >= threshold(c * t_max(n, d))
    constrained = [t for t, p in zip(trace.triangles, trace.phases) if p == "constrained"]
    assert constrained and min(constrained) >= trace.threshold
    assert trace.recount_checks == len(trace.steps)


def test_k4_pair_is_reached():
    g, _ = sample_conditioned(ChainConfig(8, 3, 1, seed=2))
    assert count_triangles(g) == 8


def test_vacuous_constraint():
    g, trace = sample_conditioned(ChainConfig(10, 3, 0, seed=1, burn_in=200, record_every=50))
    assert trace.reached_at == 0
    assert trace.steps[-1] == 200


def test_timeout_carries_trace():
    cfg = ChainConfig(30, 3, 1, seed=1, beta_schedule=[(0.0, 10)], max_steps=50, record_every=10)
    with pytest.raises(Timeout) as err:
        sample_conditioned(cfg)
    assert isinstance(err.value.trace, ChainTrace) and err.value.trace.final_graph is not None


def test_same_seed_same_trace():
    a = sample_conditioned(ChainConfig(16, 3, 0.5, seed=9))[1].to_json()
    b = sample_conditioned(ChainConfig(16, 3, 0.5, seed=9))[1].to_json()
    c = sample_conditioned(ChainConfig(16, 3, 0.5, seed=9, chain_id=1))[1].to_json()
    assert a == b and a != c
    rec = json.loads(a)
    assert rec["status"] == "empirical"


def test_trace_csv():
    _, trace = sample_conditioned(ChainConfig(12, 3, 0.25, seed=1, burn_in=300))
    lines = trace.to_csv().splitlines()
    assert lines[0] == "step,T,acceptance,beta,phase" and len(lines) == len(trace.steps) + 1


def test_chain_streams_differ():
    assert chain_rng(1, 0).random() != chain_rng(1, 1).random()
    assert chain_rng(1, 0).random() == chain_rng(1, 0).random()


def test_run_chains_reports_both_starts():
    out = run_chains(ChainConfig(16, 3, Fraction(1, 2), seed=3))
    assert [r["start"] for r in out["chains"]] == ["random", "planted"]
    assert out["status"] == "empirical"


def test_batch_means():
    x = np.tile([0, 1], 500)
    assert batch_means_stderr(x, 10) == 0.0


def test_short_calibration_two_regular_six():
    est = triangle_frequency(6, 2, 2, 20_000, thin=5, seed=12)
    assert abs(est.frequency - 1 / 7) <= 4 * est.stderr
