"""Explicit finite-n counting bounds and rate constants.

Every bound is first assembled as an exact rational; the logarithm is taken
once at the end with mpmath at 160 bits, so comparisons between bounds and
exact counts can be made on the rationals themselves.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

import mpmath

from .census import threshold
from .errors import BudgetExceeded, InfeasibleSpec, PreconditionD2N
from .generators import BlockKind, PlantedSpec
from .reveal import t_c

PREC_BITS = 160


def log_exact(x) -> mpmath.mpf:
    """Natural log of a positive integer or Fraction."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a non-positive count")
    with mpmath.workprec(PREC_BITS):
        return +(mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator)))


def _require_d2n(n: int, d: int) -> None:
    if d * d > n:
        raise PreconditionD2N(f"d^2 = {d * d} > n = {n}; bound not certified")


def phi_preimage_bound(n: int, d: int, weight: int) -> Fraction:
    """(dn)^(dn/2) * (d^2/n)^weight."""
    if not 0 <= weight <= d * n // 2:
        raise ValueError(f"weight must lie in 0..{d * n // 2}")
    return Fraction(d * n) ** (d * n // 2) * Fraction(d * d, n) ** weight


def phi_preimage_bound_log(n: int, d: int, weight: int) -> mpmath.mpf:
    return log_exact(phi_preimage_bound(n, d, weight))


def _count_bound(n: int, d: int, exponent: int) -> Fraction:
    half = d * n // 2
    return (
        Fraction(half)
        * 2**half
        * Fraction(d * n) ** half
        * Fraction(d * d, n) ** exponent
        / Fraction(factorial(d)) ** n
    )


def explicit_upper_count(n: int, d: int, c) -> Fraction:
    """(dn/2) 2^(dn/2) (dn)^(dn/2) (d^2/n)^(ceil(T_c)-1) / (d!)^n, valid for d^2 <= n."""
    _require_d2n(n, d)
    return _count_bound(n, d, threshold(t_c(n, d, c) - 1))


def explicit_upper_count_log(n: int, d: int, c) -> mpmath.mpf:
    return log_exact(explicit_upper_count(n, d, c))


def badness_extra(n: int, d: int, eps, delta) -> Fraction:
    """The additional reveal weight eps*delta*d^2*n / (6d+6) forced by bad edges."""
    return Fraction(eps) * Fraction(delta) * d * d * n / (6 * d + 6)


def badness_bound(n: int, d: int, c, eps, delta) -> Fraction:
    """Explicit bound on the number of graphs with at least eps*(d/2)*n delta-bad edges."""
    _require_d2n(n, d)
    return _count_bound(n, d, threshold(t_c(n, d, c) + badness_extra(n, d, eps, delta) - 1))


def badness_bound_log(n: int, d: int, c, eps, delta) -> mpmath.mpf:
    return log_exact(badness_bound(n, d, c, eps, delta))


def planted_family_size(spec: PlantedSpec, residual_count: int) -> int:
    """n! / (m! b! ((d+1)!)^b) * |G_d(m)|: (block choice, residual) pairs.

    This counts pairs, not graphs: a residual that itself has K_{d+1}
    components is reached from several block choices.
    """
    if spec.block_kind is not BlockKind.CLIQUE:
        raise InfeasibleSpec("the counted construction uses K_{d+1} blocks")
    return _block_choices(spec.n, spec.d, spec.b) * residual_count


def _block_choices(n: int, d: int, j: int) -> int:
    """Ways to pick j disjoint unordered (d+1)-sets from n labeled nodes."""
    rest = n - j * (d + 1)
    if rest < 0:
        return 0
    return factorial(n) // (factorial(rest) * factorial(j) * factorial(d + 1) ** j)


@lru_cache(maxsize=None)
def clique_free_residual_count(m: int, d: int) -> int:
    """Labeled d-regular graphs on m nodes with no K_{d+1} connected component.

    Splitting every d-regular graph by its set of K_{d+1} components gives
    |G_d(m)| = sum_j choices(m, j) * R(m - j(d+1)), solved here for R(m).
    """
    from .enumeration import count_regular_graphs

    if m == 0:
        return 1
    if d >= m or (d * m) % 2:
        return 0
    total = count_regular_graphs(m, d)
    j = 1
    while j * (d + 1) <= m:
        total -= _block_choices(m, d, j) * clique_free_residual_count(m - j * (d + 1), d)
        j += 1
    return total


def planted_image_count(n: int, d: int, b: int) -> int:
    """Number of distinct labeled d-regular graphs with at least b K_{d+1} components."""
    total = 0
    j = b
    while j * (d + 1) <= n:
        total += _block_choices(n, d, j) * clique_free_residual_count(n - j * (d + 1), d)
        j += 1
    return total


def gdn_log_lower_estimate(m: int, d: int) -> float:
    """(1/2) d m log(m/(d+1)) - d m: a heuristic estimate of log|G_d(m)| with
    its unknown O(1) term dropped. Never a certified bound."""
    if m == 0:
        return 0.0
    return 0.5 * d * m * math.log(m / (d + 1)) - d * m


def lower_count(n: int, d: int, c, residual_count="exact") -> int:
    """Size of the planted clique family for (n, d, c).

    ``"exact"`` counts the distinct graphs the construction produces (a
    certified lower bound on |G_{d,c}(n)|); ``"pairs"`` uses the product
    formula with the exact |G_d(m)|; an int replaces |G_d(m)| in that formula.
    """
    spec = PlantedSpec.build(n, d, c)
    if residual_count == "exact":
        return planted_image_count(n, d, spec.b)
    if residual_count == "pairs":
        from .enumeration import count_regular_graphs

        residual_count = count_regular_graphs(spec.m, d) if spec.m else 1
    return planted_family_size(spec, int(residual_count))


def lower_count_log(n: int, d: int, c, residual_count="exact") -> mpmath.mpf:
    """Log of :func:`lower_count`; ``"asymptotic"`` swaps |G_d(m)| for the
    heuristic :func:`gdn_log_lower_estimate`."""
    if residual_count == "asymptotic":
        spec = PlantedSpec.build(n, d, c)
        with mpmath.workprec(PREC_BITS):
            return log_exact(planted_family_size(spec, 1)) + mpmath.mpf(gdn_log_lower_estimate(spec.m, d))
    count = lower_count(n, d, c, residual_count)
    if count == 0:
        return mpmath.mpf("-inf")
    return log_exact(count)


class Regime(str, Enum):
    FIXED_D = "FIXED_D"
    GROWING_D = "GROWING_D"


def rate(c, d: int, regime=Regime.FIXED_D) -> Fraction:
    c = Fraction(c)
    if Regime(regime) is Regime.FIXED_D:
        return c * Fraction(d - 1, d + 1)
    return c


def default_eps_delta(n: int, d: int, c) -> tuple[float, float]:
    """delta = (3c)^(1/3) (log d / log(n/d^2))^(1/4), eps = delta^2."""
    if d < 2:
        raise ValueError("needs d >= 2")
    if d * d >= n:
        raise PreconditionD2N(f"needs n > d^2, got n={n}, d={d}")
    delta = (3 * float(c)) ** (1 / 3) * (math.log(d) / math.log(n / d**2)) ** 0.25
    if delta >= 1 / 16:
        warnings.warn(f"delta = {delta:.4f} >= 1/16: the pseudo-clique size guarantee does not apply")
    return delta * delta, delta


@dataclass
class BoundSheet:
    n: int
    d: int
    c: Fraction
    t_c: Fraction
    upper_count_log: mpmath.mpf | None = None
    lower_count_log: mpmath.mpf | None = None
    exact_count_log: mpmath.mpf | None = None
    rate_fixed_d: Fraction = Fraction(0)
    rate_growing_d: Fraction = Fraction(0)
    notes: list[str] = field(default_factory=list)

    def preimage_bound_log(self, weight: int) -> mpmath.mpf:
        return phi_preimage_bound_log(self.n, self.d, weight)

    def to_dict(self) -> dict:
        def num(x):
            return None if x is None else mpmath.nstr(x, 17)

        return {
            "n": self.n,
            "d": self.d,
            "c": str(self.c),
            "T_c": str(self.t_c),
            "lower_log": num(self.lower_count_log),
            "exact_log": num(self.exact_count_log),
            "upper_log": num(self.upper_count_log),
            "rate_fixed_d": str(self.rate_fixed_d),
            "rate_growing_d": str(self.rate_growing_d),
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def bound_sheet(n: int, d: int, c, exact: bool = False, residual_count="exact") -> BoundSheet:
    c = Fraction(c)
    sheet = BoundSheet(n, d, c, t_c(n, d, c), rate_fixed_d=rate(c, d), rate_growing_d=rate(c, d, Regime.GROWING_D))
    try:
        sheet.upper_count_log = explicit_upper_count_log(n, d, c)
    except PreconditionD2N as exc:
        sheet.notes.append(f"upper: {exc}")
    try:
        sheet.lower_count_log = lower_count_log(n, d, c, residual_count)
        if residual_count == "asymptotic":
            sheet.notes.append("lower: heuristic residual estimate, not certified")
    except (InfeasibleSpec, BudgetExceeded) as exc:
        sheet.notes.append(f"lower: {exc}")
    if exact:
        from .enumeration import exact_conditioned_count

        count = exact_conditioned_count(n, d, c)
        if count:
            sheet.exact_count_log = log_exact(count)
    return sheet
