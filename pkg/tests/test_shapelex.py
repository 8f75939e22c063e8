import random

import pytest
from hypothesis import given, strategies as st

from aogb import upoly
from aogb.groebner import buchberger, is_groebner, same_ideal
from aogb.mpoly import DRL, LEX
from aogb.shapelex import (HypothesisError, downsized_drl_feistel, field_gcd_roots, iterated_from_lex,
                           lex_gb_feistel, lex_gb_iterated, recover_key, substitution_solve)
from aogb.systems import CipherSpec, attack_instance, build_mimc_system, encrypt, hash_digest


def keys_by_search(inst):
    spec, t = inst.spec, inst.truth
    if inst.model == "hash":
        return {m for m in range(spec.q) if hash_digest(spec, m)[0] == t["alpha"]}
    if inst.model == "two_plaintext":
        return {k for k in range(spec.q) if encrypt(spec, k, t["plaintext"]) == t["ciphertext"]
                and encrypt(spec, k, t["plaintext2"]) == t["ciphertext2"]}
    pt = tuple(t["plaintext"]) if isinstance(t["plaintext"], list) else t["plaintext"]
    ct = tuple(t["ciphertext"]) if isinstance(t["ciphertext"], list) else t["ciphertext"]
    return {k for k in range(spec.q) if encrypt(spec, k, pt) == ct}


@given(st.integers(0, 10**6), st.sampled_from(["field_eq", "two_plaintext", "feistel", "hash"]),
       st.sampled_from([11, 17, 23]), st.integers(2, 4))
def test_recovered_keys_equal_exhaustive_search(seed, model, q, r):
    inst = attack_instance(model, q, r, seed)
    res = recover_key(inst.system)
    assert set(res.keys) == keys_by_search(inst)


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_iterated_shape_degrees_and_lex_basis(seed, r):
    inst = attack_instance("mimc", 11, r, seed)
    sb = lex_gb_iterated(inst.system)
    assert sb.degrees() == [3 ** i for i in range(1, r + 1)]
    if r <= 3:
        assert sorted(f.to_str(LEX) for f in buchberger(inst.system.polys, LEX).polys) == \
            sorted(f.monic(LEX).to_str(LEX) for f in sb.polys())
    back = iterated_from_lex(sb)
    assert same_ideal(buchberger(back.polys, LEX), buchberger(inst.system.polys, LEX), LEX)


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_feistel_shapes(seed, r):
    inst = attack_instance("feistel", 11, r, seed)
    sb = lex_gb_feistel(inst.system)
    assert sb.degrees() == [3 ** i for i in range(1, r + 1)]
    H = downsized_drl_feistel(inst.system)
    assert is_groebner(H.polys, DRL)
    assert sorted(H.degrees()) == [3] * r


def test_f13_shape_basis_degrees():
    spec = CipherSpec("feistel_mimc", 13, 4, round_constants=[0, 0, 0, 0])
    from aogb.systems import build_feistel_system
    S = build_feistel_system(spec, (0, 0), (0, 0))
    assert lex_gb_feistel(S).degrees() == [3, 9, 27, 81]
    assert 0 in recover_key(S).keys


@given(st.sampled_from([5, 11, 13, 101]), st.lists(st.integers(0, 100), min_size=1, max_size=8))
def test_field_gcd_roots_brute_force(q, coeffs):
    f = upoly.trim([c % q for c in coeffs])
    if not f:
        return
    roots, g = field_gcd_roots(f, q)
    assert roots == sorted(x for x in range(q) if upoly.evaluate(f, x, q) == 0)
    assert g == len(roots)


@given(st.sampled_from([7, 13]), st.lists(st.integers(0, 12), min_size=1, max_size=6),
       st.lists(st.integers(0, 12), min_size=1, max_size=6))
def test_upoly_gcd_divides_and_divmod(q, a, b):
    a, b = upoly.trim([c % q for c in a]), upoly.trim([c % q for c in b])
    if not a or not b:
        return
    qq, rr = upoly.divmod_(a, b, q)
    assert upoly.add(upoly.mul(qq, b, q), rr, q) == a and upoly.deg(rr) < upoly.deg(b)
    g = upoly.gcd(a, b, q)
    assert not upoly.mod(a, g, q) and not upoly.mod(b, g, q)


def test_constant_state_rejected():
    spec = CipherSpec("mimc", 11, 3, round_constants=[0, 0, 0])
    from aogb.systems import build_mimc_system
    S = build_mimc_system(spec, 0, 0)
    S = S.replace([S.polys[0], S.ring.gen("x2") - 3, S.polys[2]])
    with pytest.raises(HypothesisError):
        lex_gb_iterated(S)


def test_substitution_stall():
    inst = attack_instance("mimc", 11, 3, 1)
    R = inst.system.ring
    with pytest.raises(HypothesisError):
        substitution_solve([R.parse("x1^2 + x2^2 + y")], R, "y")
