import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aogb.macaulay import RowSpaceFiltration, build, row_space_polys, rref
from aogb.mpoly import DRL, LEX, Polynomial, Ring
from oracles import rank_mod_reference


def random_system(seed, q=7, nvars=3, npolys=3, max_deg=3, terms=4):
    rng = random.Random(seed)
    R = Ring.make([f"v{i}" for i in range(nvars)], q)
    polys = []
    for _ in range(npolys):
        t = {}
        for _ in range(terms):
            d = rng.randint(0, max_deg)
            cuts = sorted(rng.randint(0, d) for _ in range(nvars - 1))
            e = tuple(b - a for a, b in zip([0] + cuts, cuts + [d]))
            t[e] = rng.randrange(1, q)
        polys.append(Polynomial(R, t))
    return R, [f for f in polys if not f.is_zero()]


@given(st.integers(0, 10**6), st.integers(0, 5))
def test_matrix_rows_are_products(seed, d):
    R, F = random_system(seed)
    M = build(F, DRL, d)
    col = M.column_index()
    assert len(col) == len(M.columns)
    for row, (s, i) in zip(M.data, M.rows):
        g = F[i].mul_term(s)
        assert g.degree() <= d
        assert {M.columns[j]: int(row[j]) for j in np.flatnonzero(row)} == g.terms


@given(st.integers(0, 10**6))
def test_filtration_equals_one_shot_rref(seed):
    R, F = random_system(seed, q=5, nvars=3, max_deg=2)
    W = RowSpaceFiltration(F, DRL)
    for d in range(0, 5):
        W.advance_to(d)
        M = build(F, DRL, d)
        rows = M.data.tolist()
        assert W.rank == (rank_mod_reference(rows, R.q) if rows else 0)
        if rows:
            ref = row_space_polys(rref(M))
            ref = [f for f in ref if not f.is_zero()]
            assert sorted(f.to_str() for f in ref) == sorted(f.to_str() for f in W.basis())
        assert all(W.contains(F[i].mul_term(s)) for s, i in M.rows)


@given(st.integers(0, 10**6))
def test_contains_agrees_with_rank(seed):
    R, F = random_system(seed, q=5, nvars=2, max_deg=2)
    W = RowSpaceFiltration(F, DRL)
    W.advance_to(4)
    M = build(F, DRL, 4)
    rng = random.Random(seed)
    g = Polynomial(R, {m: rng.randrange(5) for m in rng.sample(M.columns, min(3, len(M.columns)))})
    col = M.column_index()
    vec = [0] * len(M.columns)
    for m, c in g.terms.items():
        vec[col[m]] = c
    rows = M.data.tolist()
    expect = rank_mod_reference(rows + [vec], 5) == rank_mod_reference(rows, 5) if rows else g.is_zero()
    assert W.contains(g) == expect


def test_homogeneous_mode():
    R = Ring.make(["x", "y"], 7)
    F = [R.parse("x^2 + 3*x*y"), R.parse("y^2")]
    M = build(F, DRL, 3, mode="homogeneous")
    assert M.shape == (4, 4)
    assert all(sum(m) == 3 for m in M.columns)
    with pytest.raises(ValueError):
        build([R.parse("x + 1")], DRL, 2, mode="homogeneous")
    assert "homogeneous" in M.dump().splitlines()[0]


def test_lex_filtration_rejected():
    R = Ring.make(["x", "y"], 7)
    with pytest.raises(ValueError):
        RowSpaceFiltration([R.parse("x - y")], LEX)
