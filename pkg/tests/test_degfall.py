import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aogb.complexity import macaulay_bound
from aogb.degfall import (NotInIdeal, conjecture_harness, generic_scan, last_fall_degree, membership_degree,
                          witness_feistel, witness_hash, witness_mimc_field_eq, witness_mimc_remainder)
from aogb.macaulay import build
from aogb.mpoly import DRL
from aogb.shapelex import HypothesisError
from aogb.systems import CipherSpec, append_field_equations, attack_instance, build_mimc_system
from oracles import rank_mod_reference


def falls_by_definition(polys, d_max):
    """Fall degrees from one-shot Macaulay matrices: dim(W_d ∩ P_{<=d-1}) vs dim W_{d-1}."""
    q = polys[0].ring.q
    prev, falls = 0, []
    for d in range(0, d_max + 1):
        M = build(polys, DRL, d)
        rows = M.data.tolist()
        if not rows:
            prev = 0
            continue
        top = [j for j, m in enumerate(M.columns) if sum(m) == d]
        full = rank_mod_reference(rows, q)
        low = full - (rank_mod_reference([[r[j] for j in top] for r in rows], q) if top else 0)
        if d >= 1 and low != prev:
            falls.append(d)
        prev = full
    return falls


@pytest.mark.parametrize("seed", range(4))
def test_last_fall_matches_definition(seed):
    spec = CipherSpec("mimc", 5, 2, seed=seed)
    S = build_mimc_system(spec, seed, seed + 1)
    S = append_field_equations(S, ["x1", "y"])
    res = last_fall_degree(S, d_max=8)
    assert res.falls == falls_by_definition(S.polys, 8)


def test_membership_degree():
    inst = attack_instance("mimc", 11, 3, 0)
    F = inst.system.polys
    assert all(membership_degree(f, inst.system) == f.degree() for f in F)
    R = inst.system.ring
    with pytest.raises(NotInIdeal):
        membership_degree(R.gen("y") - R.const(100), inst.system)
    rec = generic_scan(F[0] * F[1], inst.system)
    assert rec.d_f == rec.deg_witness and not rec.has_fall


def _check(rec):
    assert rec.d_f is not None and rec.d_f > rec.deg_witness
    assert rec.d_f == rec.predicted and rec.confirmed


@given(st.integers(0, 10**6), st.integers(2, 3))
def test_mimc_field_eq_witness(seed, r):
    inst = attack_instance("field_eq", 11, r, seed)
    try:
        rec = witness_mimc_field_eq(inst.system)
    except HypothesisError:
        return
    _check(rec)
    assert rec.predicted == 11 + 2 * (r - 1)


@given(st.integers(0, 10**6))
def test_feistel_witness(seed):
    inst = attack_instance("feistel", 11, 3, seed)
    try:
        rec = witness_feistel(inst.system)
    except HypothesisError:
        return
    _check(rec)
    assert rec.predicted == 3 + (3 - 2) * 2


def test_feistel_witness_r4_f11():
    hit = 0
    for seed in range(4):
        try:
            rec = witness_feistel(attack_instance("feistel", 11, 4, seed).system)
        except HypothesisError:
            continue
        _check(rec)
        assert rec.d_f == 7
        hit += 1
    assert hit


@given(st.integers(0, 10**6), st.integers(3, 4))
def test_hash_witness(seed, r):
    inst = attack_instance("hash", 11, r, seed)
    try:
        rec = witness_hash(inst.system)
    except HypothesisError:
        return
    _check(rec)
    assert rec.predicted == 11 + 2 * (r - 2)


def test_remainder_witness_q11():
    for seed in range(3):
        rec = witness_mimc_remainder(attack_instance("field_eq", 11, 3, seed).system)
        _check(rec)


def test_remainder_witness_gate_q23():
    with pytest.raises(HypothesisError):
        witness_mimc_remainder(attack_instance("field_eq", 23, 3, 0).system)


def test_feistel_witness_needs_three_rounds():
    with pytest.raises(HypothesisError):
        witness_feistel(attack_instance("feistel", 11, 2, 0).system)


@pytest.mark.parametrize("q,d", [(5, 3), (7, 5)])
@pytest.mark.parametrize("r", [2, 3])
def test_conjecture_harness(q, d, r):
    spec = CipherSpec("mimc", q, r, exponent=d, seed=2)
    S = build_mimc_system(spec, 1, 2)
    S = append_field_equations(S, list(S.ring.variables))
    rec = conjecture_harness(S)
    assert rec.hypotheses["verdict"] == "supports"
    assert rec.d_f == rec.deg_witness + 1


def test_last_fall_default_cap():
    S = attack_instance("field_eq", 11, 2, 0).system
    res = last_fall_degree(S)
    assert res.scanned_to == macaulay_bound(S.degrees(), S.ring.nvars) + 2
    assert res.degree is not None and res.degree <= res.scanned_to
