import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from seplab.moments import (PROOF_P, THEOREM_P2, binomial_moment4, critical_p,
                            expectation_polytope, expectation_triangulation, falling_factorial,
                            moment_report, variance_case1_polytope, variance_case1_subcases)
from seplab.oracle import POLYTOPE_COMBINATORIAL, TRIANGULATION_COMBINATORIAL, exhaustive_expectation

rationals = st.fractions(min_value=0, max_value=1, max_denominator=50)


def test_complete_graph_values():
    assert expectation_polytope(3, 1) == 6
    assert expectation_polytope(4, 1) == 24
    assert expectation_triangulation(3, 1) == 12


def test_half_at_four_nodes():
    assert expectation_polytope(4, Fraction(1, 2)) == Fraction(21, 2)
    assert expectation_polytope(4, 0.5) == 10.5


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("p", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1, 3)])
def test_closed_forms_match_exhaustive_enumeration(n, p):
    assert exhaustive_expectation(n, p, POLYTOPE_COMBINATORIAL) == expectation_polytope(n, p)
    assert exhaustive_expectation(n, p, TRIANGULATION_COMBINATORIAL) == \
        expectation_triangulation(n, p, PROOF_P)


def test_origin_variants_differ_at_two_nodes():
    assert expectation_triangulation(2, Fraction(1, 2), PROOF_P) == 1
    assert expectation_triangulation(2, Fraction(1, 2), THEOREM_P2) == Fraction(1, 2)
    with pytest.raises(ValueError):
        expectation_triangulation(2, 0.5, "other")


def _disjoint_part_variance(n, p):
    """Variance of the disjoint-pair part of K by summing over all 2^C(n,2) graphs."""
    arcs = list(itertools.combinations(range(n), 2))
    idx = {a: i for i, a in enumerate(arcs)}
    masks = np.arange(1 << len(arcs), dtype=np.int64)
    present = ((masks[:, None] >> np.arange(len(arcs))) & 1).astype(bool)
    m = present.sum(1)
    w = p**m * (1 - p) ** (len(arcs) - m)

    def arc(u, v):
        return present[:, idx[(min(u, v), max(u, v))]]

    total = np.zeros(len(masks))
    for e, f in itertools.combinations(arcs, 2):
        if set(e) & set(f):
            continue
        for a, b in (e, e[::-1]):
            for c, d in (f, f[::-1]):
                total += arc(a, b) & arc(c, d) & ~(arc(b, c) & arc(d, a))
    mean = (w * total).sum()
    return (w * total * total).sum() - mean**2


@pytest.mark.parametrize("n, p", [(4, 0.3), (5, 0.3), (5, 0.7), (6, 0.45)])
def test_principal_variance_is_exact_for_disjoint_part(n, p):
    assert variance_case1_polytope(n, p) == pytest.approx(_disjoint_part_variance(n, p), rel=1e-10)


@given(st.integers(2, 40), rationals)
def test_subcases_sum_to_compact_form(n, p):
    assert sum(variance_case1_subcases(n, p).values()) == variance_case1_polytope(n, p)


def test_leading_coefficient_vanishes_at_critical_p():
    n = 10**4
    lead = lambda p: 2 * falling_factorial(n, 6) * p**3 * (1 - p) * (1 - 2 * p**2) ** 2
    assert variance_case1_polytope(n, critical_p()) < 1e-3 * lead(0.6)


@pytest.mark.parametrize("m, p", [(0, Fraction(1, 3)), (1, Fraction(1, 3)), (2, Fraction(1, 2)),
                                  (5, Fraction(2, 7)), (9, Fraction(9, 10))])
def test_binomial_fourth_moment_by_enumeration(m, p):
    direct = sum(math.comb(m, k) * p**k * (1 - p) ** (m - k) * k**4 for k in range(m + 1))
    assert binomial_moment4(m, p) == direct


def test_binomial_small_case():
    # X ~ Bin(2, 1/2): E X^4 = (0 + 2 * 1 + 16) / 4
    assert binomial_moment4(2, Fraction(1, 2)) == Fraction(9, 2)


def test_float_input_returns_float():
    assert isinstance(expectation_polytope(10, 0.3), float)
    assert isinstance(expectation_polytope(10, Fraction(3, 10)), Fraction)


@pytest.mark.parametrize("p", [-0.1, 1.1])
def test_probability_range(p):
    with pytest.raises(ValueError):
        expectation_polytope(5, p)


def test_moment_report_labels():
    r = moment_report(100, 0.7071)
    assert "critical" in r.regime_label
    assert "generic" in moment_report(100, 0.3).regime_label
    assert math.isnan(moment_report(10, 0.3, "triangulation").variance_principal)
