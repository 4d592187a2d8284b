from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import factorial

import pytest

from trireg.census import count_triangles
from trireg.enumeration import (
    count_by_triangles,
    count_regular_graphs,
    double_factorial,
    enumerate_pairings,
    enumerate_regular_graphs,
    exact_conditioned_count,
    exact_k_clique_conditioned_count,
    orbit_identity,
    phi_preimage_histogram,
    sweep_pairings,
)
from trireg.errors import BudgetExceeded, ParityViolation
from trireg.graph import attach_ports, complete_graph, prism_graph


def brute_regular(n, d):
    """Every d-regular edge set on n nodes, by checking all dn/2-subsets of pairs."""
    out = []
    for es in combinations(list(combinations(range(n), 2)), d * n // 2):
        deg = Counter(x for e in es for x in e)
        if all(deg[v] == d for v in range(n)):
            out.append(es)
    return out


@pytest.mark.parametrize("n,d", [(4, 2), (5, 2), (5, 4), (6, 2), (6, 3), (6, 4), (7, 2), (7, 4)])
def test_graphs_match_brute_force(n, d):
    ours = sorted(tuple(g.edges()) for g in enumerate_regular_graphs(n, d))
    assert ours == sorted(brute_regular(n, d))
    assert len(set(ours)) == len(ours)


# labeled counts: 2-regular 1,3,12,70,465,3507,30016 (n=3..9); cubic 1,70,19355 (n=4,6,8);
# 4-regular 1,15,465,19355 (n=5..8)
KNOWN = {
    (3, 2): 1, (4, 2): 3, (5, 2): 12, (6, 2): 70, (7, 2): 465, (8, 2): 3507, (9, 2): 30016,
    (4, 3): 1, (6, 3): 70, (8, 3): 19355,
    (5, 4): 1, (6, 4): 15, (7, 4): 465, (8, 4): 19355,
}


@pytest.mark.parametrize("nd,count", sorted(KNOWN.items()))
def test_known_counts(nd, count):
    assert count_regular_graphs(*nd) == count


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_closed_forms_match_enumeration(n):
    assert count_regular_graphs(n, 1) == sum(1 for _ in enumerate_regular_graphs(n, 1)) == double_factorial(n - 1)
    if n > 2:
        assert count_regular_graphs(n, n - 2) == sum(1 for _ in enumerate_regular_graphs(n, n - 2))


def test_triangle_distributions():
    assert count_by_triangles(6, 2) == {0: 60, 2: 10}
    assert count_by_triangles(5, 2) == {0: 12}
    assert count_by_triangles(6, 3) == {0: 10, 2: 60}
    assert count_by_triangles(8, 3) == {0: 3360, 1: 3360, 2: 10080, 4: 2520, 8: 35}
    assert count_by_triangles(9, 2) == {0: 24696, 1: 5040, 3: 280}
    assert [g.edges() for g in enumerate_regular_graphs(4, 3)] == [complete_graph(4).edges()]


def test_two_regular_triangle_counts_analytic():
    # on 6 nodes: 5!/2 hexagons, C(6,3)/2 triangle pairs
    assert count_by_triangles(6, 2) == {0: factorial(5) // 2, 2: 20 // 2}


def test_conditioned_counts():
    assert exact_conditioned_count(6, 2, 1) == 10
    assert exact_conditioned_count(6, 2, 0) == 70
    assert exact_conditioned_count(4, 3, 1) == 1
    assert exact_k_clique_conditioned_count(8, 3, 1, 4) == 35 == factorial(8) // (factorial(4) ** 2 * 2)
    assert exact_k_clique_conditioned_count(4, 3, 1, 4) == 1


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_regular_graphs(10, 3, max_graphs=100))
    with pytest.raises(BudgetExceeded):
        sweep_pairings(10, 2)
    with pytest.raises(ParityViolation):
        count_regular_graphs(5, 3)


@pytest.mark.parametrize("n,d", [(4, 3), (6, 2), (5, 2), (4, 2)])
def test_pairing_sweeps_agree(n, d):
    py = enumerate_pairings(n, d)
    fast = sweep_pairings(n, d)
    slow = sweep_pairings(n, d, prune=False)
    for r in (py, fast, slow):
        assert r.total_pairings == double_factorial(n * d - 1)
        assert r.simple_pairings == count_regular_graphs(n, d) * factorial(d) ** n
        assert r.count_by_triangles == count_by_triangles(n, d)
    assert py.phi_histogram == fast.phi_histogram == slow.phi_histogram


def test_pairing_values():
    r = sweep_pairings(4, 3)
    assert (r.total_pairings, r.simple_pairings, r.total_simple_graphs) == (10395, 1296, 1)
    r = sweep_pairings(6, 2)
    assert (r.total_pairings, r.simple_pairings) == (10395, 4480)
    assert r.preimages_by_weight() == {0: [3840], 2: [256, 384]}
    assert r.profile((1 << 6) - 1).weight == 6 and (1 << 6) - 1 not in r.phi_histogram
    r = sweep_pairings(5, 2)
    assert (r.total_pairings, r.simple_pairings, r.total_simple_graphs) == (945, 384, 12)


def test_sharded_sweep_matches():
    one = sweep_pairings(6, 2)
    many = sweep_pairings(6, 2, jobs=2)
    assert one.to_dict() == many.to_dict()


def test_histogram_total_and_json():
    r = phi_preimage_histogram(6, 2)
    assert sum(r.phi_histogram.values()) == r.simple_pairings
    d = r.to_dict()
    assert d["count_by_triangles"] == {"0": 60, "2": 10}
    assert phi_preimage_histogram(4, 3, backend="python").to_dict() == phi_preimage_histogram(4, 3).to_dict()


def test_visitor_sees_multigraphs():
    seen = Counter()
    enumerate_pairings(4, 2, visitor=lambda pairs, gs: seen.update([gs is None]))
    assert seen[False] == 3 * 2**4 and seen[True] + seen[False] == 105


@pytest.mark.parametrize("g,c", [(complete_graph(4), 1), (prism_graph(), Fraction(1, 4))])
def test_orbit_identity(g, c):
    left, right = orbit_identity(attach_ports(g), c)
    assert left == right


def test_triangle_count_consistency():
    for g in enumerate_regular_graphs(6, 3):
        assert count_triangles(g) in (0, 2)
