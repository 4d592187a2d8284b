import math
import warnings
from fractions import Fraction
from math import factorial

import mpmath
import pytest
from hypothesis import given, strategies as st

from trireg.bounds import (
    Regime,
    badness_bound,
    badness_bound_log,
    bound_sheet,
    clique_free_residual_count,
    default_eps_delta,
    explicit_upper_count,
    explicit_upper_count_log,
    gdn_log_lower_estimate,
    log_exact,
    lower_count,
    lower_count_log,
    phi_preimage_bound,
    phi_preimage_bound_log,
    planted_family_size,
    planted_image_count,
    rate,
)
from trireg.census import t_max, threshold
from trireg.enumeration import count_by_triangles, exact_conditioned_count, sweep_pairings
from trireg.errors import InfeasibleSpec, PreconditionD2N
from trireg.generators import PlantedSpec


def test_preimage_bound_formula():
    assert phi_preimage_bound(6, 2, 0) == 12**6
    assert phi_preimage_bound(6, 2, 2) == 12**6 * Fraction(4, 6) ** 2
    assert abs(phi_preimage_bound_log(4, 3, 1) - (6 * math.log(12) + math.log(9 / 4))) < 1e-12
    with pytest.raises(ValueError):
        phi_preimage_bound(6, 2, 7)


@pytest.mark.parametrize("n,d", [(4, 3), (6, 2), (5, 2)])
def test_preimage_bound_holds_pointwise(n, d):
    for key, cnt in sweep_pairings(n, d).phi_histogram.items():
        assert cnt <= phi_preimage_bound(n, d, bin(key).count("1"))


def test_upper_count_formula():
    n, d, c = 6, 2, 1
    want = Fraction(6) * 2**6 * Fraction(12) ** 6 * Fraction(4, 6) ** 1 / Fraction(2) ** 6
    assert explicit_upper_count(n, d, c) == want
    assert explicit_upper_count_log(n, d, c) == log_exact(want)


def test_upper_needs_d2_le_n():
    with pytest.raises(PreconditionD2N):
        explicit_upper_count(8, 3, Fraction(1, 2))


def test_lower_count_examples():
    assert lower_count(6, 2, 1) == 10
    assert lower_count_log(6, 2, 1) == log_exact(10)
    assert lower_count(9, 2, 1) == 280 == factorial(9) // (factorial(3) * 6**3)
    spec = PlantedSpec.build(8, 3, Fraction(1, 2))
    assert planted_family_size(spec, 1) == 70
    assert lower_count(8, 3, Fraction(1, 2), residual_count="pairs") == 70
    # the 70 pairs cover 35 distinct graphs: K4 + K4 is reached from both block choices
    assert lower_count(8, 3, Fraction(1, 2)) == 35
    assert exact_conditioned_count(8, 3, Fraction(1, 2)) >= 70


def test_pair_formula_overcounts_where_images_do_not():
    assert lower_count(9, 2, Fraction(1, 3), residual_count="pairs") == 5880
    assert lower_count(9, 2, Fraction(1, 3)) == 5320 == exact_conditioned_count(9, 2, Fraction(1, 3))


def test_residual_counts():
    assert clique_free_residual_count(6, 2) == 60
    assert clique_free_residual_count(4, 3) == 0
    assert clique_free_residual_count(10, 1) == 0
    assert clique_free_residual_count(0, 3) == 1
    # graphs on 9 nodes with at least one triangle component
    by_t = count_by_triangles(9, 2)
    assert planted_image_count(9, 2, 1) == by_t[1] + by_t[3]


def test_infeasible_lower():
    with pytest.raises(InfeasibleSpec):
        lower_count(8, 2, Fraction(1, 2))
    assert lower_count_log(10, 1, 1) == log_exact(945)


def test_asymptotic_residual_is_labeled_heuristic():
    sheet = bound_sheet(40, 3, Fraction(1, 2), residual_count="asymptotic")
    assert any("heuristic" in note for note in sheet.notes)
    assert gdn_log_lower_estimate(0, 3) == 0.0


def test_rates():
    assert rate(Fraction(1, 2), 3) == Fraction(1, 4)
    assert rate(Fraction(2, 3), 50, Regime.GROWING_D) == Fraction(2, 3)
    assert abs(rate(Fraction(1, 2), 10**6) - Fraction(1, 2)) < Fraction(1, 10**5)


def test_badness_bound():
    assert badness_bound(9, 3, Fraction(1, 2), 0, Fraction(1, 10)) == explicit_upper_count(9, 3, Fraction(1, 2))
    assert badness_bound(9, 3, Fraction(1, 2), Fraction(1, 10), 0) == explicit_upper_count(9, 3, Fraction(1, 2))
    # d^2/n = 1 here, so extra weight cannot shrink the bound
    b = badness_bound_log(9, 3, Fraction(1, 2), Fraction(1, 10), Fraction(1, 10))
    assert mpmath.isfinite(b) and b <= explicit_upper_count_log(9, 3, Fraction(1, 2))
    assert badness_bound(100, 3, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)) < explicit_upper_count(100, 3, Fraction(1, 2))


def test_default_eps_delta():
    # c = 1/3, log d = 1, log(n/d^2) = 16  ->  delta = 1/2, eps = 1/4
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        eps, delta = default_eps_delta(math.exp(18), math.e, Fraction(1, 3))
    assert abs(delta - 0.5) < 1e-12 and abs(eps - 0.25) < 1e-12
    assert caught
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, d3 = default_eps_delta(10**6, 3, Fraction(1, 2))
        _, d5 = default_eps_delta(10**6, 5, Fraction(1, 2))
    assert d3 < d5
    with pytest.raises(PreconditionD2N):
        default_eps_delta(9, 3, Fraction(1, 2))


def test_sheet_json():
    s = bound_sheet(6, 2, 1, exact=True)
    rec = s.to_dict()
    assert rec["T_c"] == "2" and rec["exact_log"].startswith("2.302585")
    assert bound_sheet(8, 3, Fraction(1, 2)).notes


SMALL = {nd: count_by_triangles(*nd) for nd in [(4, 1), (6, 1), (4, 2), (5, 2), (6, 2), (7, 2), (8, 2), (9, 2)]}


@given(st.sampled_from(sorted(SMALL)), st.fractions(0, 1))
def test_sandwich_property(nd, c):
    n, d = nd
    need = threshold(c * t_max(n, d))
    exact = sum(v for t, v in SMALL[nd].items() if t >= need)
    assert exact <= explicit_upper_count(n, d, c)
    try:
        assert lower_count(n, d, c) <= exact
    except InfeasibleSpec:
        pass


@given(st.integers(2, 40), st.sampled_from([1, 2, 3, 4]), st.fractions(0, 1), st.fractions(0, 1))
def test_upper_monotone_in_c(n, d, c1, c2):
    if d * d > n or (n * d) % 2 or d >= n:
        return
    lo, hi = sorted((c1, c2))
    assert explicit_upper_count(n, d, hi) <= explicit_upper_count(n, d, lo)
