import itertools
import random

import pytest
from hypothesis import given, strategies as st

from aogb.groebner import (BudgetExceeded, buchberger, hilbert_numerator, hilbert_polynomial_part, is_groebner,
                           linear_algebra_gb, normal_form, quotient_dimension, same_ideal, solving_degree,
                           standard_monomials)
from aogb.mpoly import DRL, LEX, Ring, mono_divides
from oracles import brute_force_zeros, sympy_groebner
from test_macaulay import random_system


def with_field_equations(R, F):
    return F + [R.gen(v) ** R.q - R.gen(v) for v in R.variables]


@given(st.integers(0, 10**6), st.sampled_from([DRL, LEX]))
def test_buchberger_matches_sympy(seed, order):
    R, F = random_system(seed, q=7, nvars=3, max_deg=2, terms=3)
    G = buchberger(F, order)
    want = sympy_groebner(F, R, "grevlex" if order is DRL else "lex")
    assert sorted(f.to_str() for f in G.polys) == sorted(f.to_str() for f in want)
    assert is_groebner(G.polys, order)


@given(st.integers(0, 10**6))
def test_quotient_dimension_counts_field_points(seed):
    R, F = random_system(seed, q=3, nvars=3, max_deg=2, terms=3)
    F = with_field_equations(R, F)
    G = buchberger(F, DRL)
    # with all field equations the ideal is radical, so dim P/I = number of F_q zeros
    assert quotient_dimension(G) == len(brute_force_zeros(F, R))
    assert len(standard_monomials(G)) == quotient_dimension(G)


@given(st.integers(0, 10**6))
def test_linear_algebra_gb_matches_buchberger(seed):
    R, F = random_system(seed, q=5, nvars=2, max_deg=2, terms=3)
    F = with_field_equations(R, F)
    G = buchberger(F, DRL)
    res = solving_degree(F, d_max=14)
    assert res.degree is not None
    H, ok = linear_algebra_gb(F, DRL, res.degree)
    assert ok and same_ideal(G, H)
    assert sorted(f.to_str() for f in G.polys) == sorted(f.to_str() for f in H.polys)
    if res.degree > max(f.degree() for f in F):
        assert not linear_algebra_gb(F, DRL, res.degree - 1)[1]


def test_normal_form_membership():
    R = Ring.make(["x", "y"], 11)
    F = [R.parse("x^2 - y"), R.parse("y^2 - 1")]
    G = buchberger(F)
    assert normal_form(R.parse("x^4 - 1"), G).is_zero()
    assert not normal_form(R.parse("x - 1"), G).is_zero()


def test_unit_ideal_and_budget():
    R = Ring.make(["x", "y"], 5)
    G = buchberger([R.parse("x*y - 1"), R.parse("x")])
    assert [f.to_str() for f in G.polys] == ["1"]
    F = [R.parse("x^3 + y^2 + 1"), R.parse("x*y^2 + x + 2"), R.parse("y^3 + x^2 + 3")]
    with pytest.raises(BudgetExceeded):
        buchberger(F, DRL, pair_budget=1)


def brute_hilbert(gens, nvars, dmax):
    return [sum(1 for m in itertools.product(range(d + 1), repeat=nvars) if sum(m) == d
                and not any(mono_divides(g, m) for g in gens)) for d in range(dmax + 1)]


@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=5))
def test_hilbert_numerator_against_enumeration(raw):
    gens = [tuple(m) for m in raw] + [(4, 0, 0), (0, 4, 0), (0, 0, 4)]
    h = hilbert_polynomial_part(gens, 3)
    want = brute_hilbert(gens, 3, 12)
    while want and want[-1] == 0:
        want.pop()
    assert h == want


def test_hilbert_positive_dimensional():
    assert hilbert_polynomial_part([(1, 1)], 2) is None
    assert hilbert_numerator([(1, 1)], 2) == [1, 0, -1]
    R = Ring.make(["x", "y"], 5)
    assert quotient_dimension(buchberger([R.parse("x*y")])) == float("inf")
