import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import regular_graphs
from trireg.census import count_k_cliques, count_triangles, edge_triangle_table
from trireg.errors import NotAGoodEdge
from trireg.generators import BlockKind, PlantedSpec, block_triangles, plant_family, planted_blocks
from trireg.graph import build_graph, complete_graph, disjoint_union, matched_complement, petersen_graph, prism_graph
from trireg.structure import (
    DisjointSet,
    Mode,
    as_fraction,
    assemble_pseudo_cliques,
    classify_badness,
    dense_spot_from_edge,
    find_d_plus_1_cliques,
    is_delta_bad,
    pseudo_clique_size_bound,
    strip_triangle_free_edges,
    structure_report,
)

TWO_K4 = disjoint_union([complete_graph(4), complete_graph(4)])


def test_prism_badness():
    r = classify_badness(prism_graph(), Fraction(1, 10))
    assert len(r.bad_edges) == 6
    assert set(r.bad_edges).isdisjoint({(0, 3), (1, 4), (2, 5)})
    assert r.bad_nodes_fixed == (0, 1, 2, 3, 4, 5)


def test_cut_is_strict_at_the_boundary():
    # prism: d-1-delta*d = 1 exactly at delta = 1/3, so t_e = 1 sits on the cut
    assert not is_delta_bad(1, 3, Fraction(1, 3))
    assert is_delta_bad(1, 3, Fraction(1, 4))
    assert not is_delta_bad(0, 3, Fraction(1, 10))
    assert not is_delta_bad(18, 20, 0.05)
    assert is_delta_bad(17, 20, 0.05)
    assert as_fraction(0.05) == Fraction(1, 20)


@pytest.mark.parametrize("delta", [Fraction(1, 10), Fraction(1, 3), Fraction(1, 2)])
def test_clean_graphs_have_no_badness(delta):
    for g in (TWO_K4, petersen_graph()):
        r = classify_badness(g, delta)
        assert r.bad_edges == () and r.bad_nodes_fixed == () and r.bad_nodes_growing == ()


def test_find_cliques():
    assert find_d_plus_1_cliques(complete_graph(4)) == [frozenset(range(4))]
    assert find_d_plus_1_cliques(prism_graph()) == []
    spec = PlantedSpec.for_blocks(20, 3, 3)
    g = plant_family(spec, 2)
    residual = build_graph(8, 3, [(u - 12, v - 12) for u, v in g.edges() if u >= 12])
    assert count_k_cliques(residual, 4) == 0
    assert sorted(find_d_plus_1_cliques(g), key=min) == planted_blocks(spec)


def test_strip():
    gp = strip_triangle_free_edges(prism_graph())
    assert gp.graph.edges() == [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    assert strip_triangle_free_edges(petersen_graph()).graph.num_edges == 0
    assert strip_triangle_free_edges(complete_graph(4)).graph.edges() == complete_graph(4).edges()


def test_spot_in_complete_block():
    g = plant_family(PlantedSpec.for_blocks(210, 20, 5), 1)
    spot = dense_spot_from_edge(strip_triangle_free_edges(g), 0, 1, Fraction(1, 20))
    assert spot.nodes == frozenset(range(21))


def test_spot_in_matched_complement():
    g = matched_complement(4)
    gp = strip_triangle_free_edges(g)
    assert gp.t_e(0, 2) == 2
    spot = dense_spot_from_edge(gp, 0, 2, Fraction(3, 10))
    assert spot.nodes == frozenset({0, 2, 4, 5})


def test_spot_rejects_bad_or_missing_edge():
    gp = strip_triangle_free_edges(prism_graph())
    with pytest.raises(NotAGoodEdge):
        dense_spot_from_edge(gp, 0, 1, Fraction(1, 10))
    with pytest.raises(NotAGoodEdge):
        dense_spot_from_edge(gp, 0, 3, Fraction(1, 10))


def test_prism_has_no_spots():
    rep = assemble_pseudo_cliques(prism_graph(), Fraction(1, 10))
    assert rep.blocks == [] and rep.spot_count == 0


@pytest.mark.parametrize("kind", list(BlockKind))
def test_planted_recovery(kind):
    spec = PlantedSpec.for_blocks(210, 20, 5, kind)
    g = plant_family(spec, 7)
    rep = assemble_pseudo_cliques(g, Fraction(1, 20))
    assert sorted(rep.blocks, key=min) == planted_blocks(spec)
    assert all(v is not False for v in rep.checks.values())
    assert rep.covered_triangles == 5 * block_triangles(20, kind)
    assert rep.coverage_fraction == Fraction(rep.covered_triangles, count_triangles(g))


def test_size_bound_value():
    assert pseudo_clique_size_bound(20, Fraction(1, 20)) == Fraction(36)


def test_triangle_free_coverage_is_one():
    rep = assemble_pseudo_cliques(petersen_graph(), Fraction(1, 20))
    assert rep.blocks == [] and rep.coverage_fraction == 1


def test_warnings_for_small_delta_d():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = assemble_pseudo_cliques(TWO_K4, Fraction(1, 20))
    assert caught and rep.warnings
    assert rep.checks["size_bound"] is True
    assert sorted(rep.blocks, key=min) == [frozenset(range(4)), frozenset(range(4, 8))]


def test_fixed_mode_reports():
    rep = structure_report(TWO_K4, 1)
    assert len(rep.blocks) == 2 and rep.coverage_fraction == 1 and rep.bad_nodes == ()
    rep = structure_report(prism_graph(), 0)
    assert rep.blocks == [] and rep.coverage_fraction == 0 and len(rep.bad_nodes) == 6


def test_fixed_mode_planted():
    spec = PlantedSpec.build(20, 3, Fraction(3, 5))
    g = plant_family(spec, 5)
    rep = structure_report(g, spec.c)
    assert len(rep.blocks) == 3
    t = edge_triangle_table(g).t
    in_residual_triangle = {v for (u, w), x in t.items() if x and u >= 12 for v in (u, w)}
    assert set(rep.bad_nodes) == in_residual_triangle


def test_growing_mode_json():
    spec = PlantedSpec.for_blocks(60, 5, 5)
    g = plant_family(spec, 1)
    rep = structure_report(g, spec.c, Mode.GROWING_D, delta=Fraction(1, 20))
    d = rep.to_dict()
    assert d["mode"] == "GROWING_D" and d["delta"] == "1/20"
    assert len(d["blocks"]) == 5


def test_disjoint_set():
    ds = DisjointSet(range(5))
    ds.union(0, 1)
    ds.union(3, 4)
    ds.union(1, 4)
    assert sorted(sorted(g) for g in ds.groups()) == [[0, 1, 3, 4], [2]]


@given(regular_graphs(max_n=16, degrees=(3, 4, 5, 6)), st.sampled_from([Fraction(1, 20), Fraction(1, 10)]))
def test_pseudo_cliques_disjoint_and_coverage(g, delta):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = assemble_pseudo_cliques(g, delta)
    assert rep.checks["pseudo_cliques_disjoint"]
    assert rep.checks["spot_overlap"] and rep.checks["spot_transitive"]
    assert 0 <= rep.coverage_fraction <= 1
    assert rep.covered_triangles <= count_triangles(g)
    assert all(len(b) >= 3 for b in rep.blocks)


@given(regular_graphs(max_n=16, degrees=(2, 3, 4)))
def test_fixed_mode_cliques_are_components(g):
    for b in find_d_plus_1_cliques(g):
        assert len(b) == g.d + 1
        assert all(g.nbr_sets[v] | {v} == b for v in b)
