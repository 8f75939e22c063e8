"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line; run directly to see only the lines:

    python tests/test_acceptance.py
"""

from __future__ import annotations

import math
import sys
import time

from aogb.cli import main as cli_main
from aogb.complexity import desk_solving_degree, macaulay_bound, reproduce_tables
from aogb.degfall import witness_feistel, witness_hash, witness_mimc_field_eq
from aogb.genpos import feistel_rank_criterion, is_generic_coordinates, spn_genericity
from aogb.groebner import buchberger, is_groebner, linear_algebra_gb, quotient_dimension, same_ideal, solving_degree
from aogb.mpoly import DRL
from aogb.shapelex import HypothesisError, downsized_drl_feistel, lex_gb_feistel, lex_gb_iterated, recover_key
from aogb.systems import (CipherSpec, attack_instance, build_feistel_system, eliminate_linear, spn_transform,
                          sponge_example_f5)

RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    return ok


GRID = [(q, r) for q in (11, 23, 29) for r in (2, 3)]
DESK_MODELS = ("field_eq", "two_plaintext", "feistel", "hash")


# 1, 2: complexity tables

def criterion_1():
    t0 = time.perf_counter()
    rows = [r for r in reproduce_tables() if r.column == "groebner"]
    dt = time.perf_counter() - t0
    off = [r for r in rows if not r.within]
    # the two comparison cells printing 527.4 must be reported as discrepancies, not matched
    flagged = all(r.note and abs(r.computed - 572.4) <= 0.5 for r in off) and len(off) == 2
    dedicated = all(r.within for r in rows if r.table != "comparison")
    ok = dedicated and flagged and dt < 1.0
    return record(1, ok, f"{len(rows) - len(off)}/{len(rows)} cells within 0.5 bits; "
                         f"reported discrepancies: {[(r.label, r.golden, round(r.computed, 1)) for r in off]}; "
                         f"{dt * 1000:.1f} ms")


def criterion_2():
    t0 = time.perf_counter()
    rows = [r for r in reproduce_tables() if r.column == "established"]
    dt = time.perf_counter() - t0
    worst = max(abs(r.delta) for r in rows)
    ok = all(r.within for r in rows) and dt < 1.0
    return record(2, ok, f"{sum(r.within for r in rows)}/{len(rows)} cells within 1.0 bits, "
                         f"max |delta| {worst:.2f}; {dt * 1000:.1f} ms")


# 3: rank criterion table

RANK_TABLE = {3: {10: True, 11: False, 12: True, 13: False},
              4: {12: True, 13: True, 14: False, 15: True, 16: True, 17: False},
              5: {10: True, 11: False, 12: True, 13: False}}


def criterion_3():
    t0 = time.perf_counter()
    bad = []
    for q in (11, 101):
        for family in ("gmimc_crf", "gmimc_erf"):
            for n, col in RANK_TABLE.items():
                for r, want in col.items():
                    rep = feistel_rank_criterion(CipherSpec(family, q, r, branches=n, layer="shift"))
                    if rep.witness["full_rank"] != want:
                        bad.append((q, family, n, r))
    dt = time.perf_counter() - t0
    return record(3, not bad and dt < 10, f"shift layer, crf and erf, q in (11, 101): mismatches {bad}; {dt:.2f} s")


# 4: desk-scale solving degrees

def measure_solving_degree(model, q, r, seed=0):
    inst = attack_instance(model, q, r, seed)
    S = inst.system
    bound = macaulay_bound(S.degrees(), S.ring.nvars)
    res = solving_degree(S, d_max=bound, time_budget=60)
    lower = None
    if res.gb is not None:
        lower = max(max(S.degrees()), res.gb.max_degree())
    return res, lower, bound


def criterion_4():
    t0 = time.perf_counter()
    exact, sandwich_ok, findings, skips, n = 0, True, [], [], 0
    for q, r in GRID:
        for model in DESK_MODELS:
            res, lower, bound = measure_solving_degree(model, q, r)
            if res.exhausted:
                skips.append((model, q, r))
                continue
            n += 1
            want = desk_solving_degree(model, q, r)["expected"]
            exact += res.degree == want
            if res.degree != want:
                findings.append((model, q, r, res.degree, want))
            sandwich_ok &= lower <= res.degree <= bound
    dt = time.perf_counter() - t0
    return record(4, sandwich_ok and n > 0,
                  f"{exact}/{n} grid points match q+2r-1 / 4r / 2r / q+2r-3 exactly; sandwich "
                  f"{'holds' if sandwich_ok else 'violated'}; findings {findings}; skipped {skips}; {dt:.1f} s")


# 5: degree-fall witnesses

WITNESS_MODELS = {"mimc_field_eq": ("field_eq", witness_mimc_field_eq),
                  "feistel": ("feistel", witness_feistel),
                  "hash": ("hash", witness_hash)}


def criterion_5():
    confirmed, gated, failed = {k: 0 for k in WITNESS_MODELS}, [], []
    for kind, (model, fn) in WITNESS_MODELS.items():
        for q, r in GRID:
            try:
                rec = fn(attack_instance(model, q, r, 0).system)
            except HypothesisError as e:
                gated.append((kind, q, r, str(e)[:40]))
                continue
            if rec.d_f is not None and rec.d_f > rec.deg_witness and rec.d_f == rec.predicted:
                confirmed[kind] += 1
            else:
                failed.append((kind, q, r, rec.d_f, rec.predicted))
    ok = not failed and all(confirmed.values())
    return record(5, ok, f"confirmed falls {confirmed}; failures {failed}; gated out {len(gated)}: "
                         f"{[g[:3] for g in gated]}")


# 6: oracle equivalence

def oracle_cases():
    cases = []
    for seed in range(3):
        for model, q, r in (("field_eq", 5, 2), ("mimc", 11, 3), ("two_plaintext", 11, 2), ("feistel", 11, 3),
                            ("hash", 5, 3)):
            cases.append(attack_instance(model, q, r, seed).system)
    specs = [CipherSpec("gmimc_erf", 11, 2, branches=3), CipherSpec("gmimc_crf", 13, 2, branches=2),
             CipherSpec("feistel_scrf", 7, 2, branches=3), CipherSpec("hades", 11, branches=2, r_f=1, r_p=1),
             CipherSpec("gmimc_crf", 11, 3, branches=2), CipherSpec("hades", 5, branches=2, r_f=1, r_p=0),
             CipherSpec("gmimc_erf", 13, 2, branches=2, layer="circulant"),
             CipherSpec("hades", 11, branches=2, r_f=1, r_p=1, layer="cauchy", key_schedule="affine")]
    for j, spec in enumerate(specs):
        cases.append(attack_instance("spn", spec.q, spec.rounds, j, spec=spec).system)
    return cases


def criterion_6():
    t0 = time.perf_counter()
    cases = oracle_cases()
    bad = []
    for S in cases:
        assert S.ring.q <= 13 and S.ring.nvars <= 8
        sd = solving_degree(S, d_max=macaulay_bound(S.degrees(), S.ring.nvars) + 1)
        la, ok = linear_algebra_gb(S, DRL, sd.degree)
        B = buchberger(S.polys, DRL)
        if not (ok and same_ideal(la, B)):
            bad.append(S.provenance.get("builder"))
    dt = time.perf_counter() - t0
    return record(6, not bad and len(cases) >= 20 and dt < 300,
                  f"{len(cases) - len(bad)}/{len(cases)} instances agree; {dt:.1f} s")


# 7: structural Groebner basis claims

F13_PUBLISHED = ["y^3 - xR2",
             "xR2^3 - 2*xR2^2*y - 2*xR2*y^2 + y^3 - xR3",
             "xR3^3 - 2*xR3^2*y - 2*xR3*y^2 + 2*y^3 - xL3",
             "xL3^3 - 2*xL3^2*y - 2*xL3*y^2 + y^3 + y + xR3"]


def f13_rendering(q=13):
    spec = CipherSpec("feistel_mimc", q, 4, round_constants=[0, 0, 0, 0])
    H = downsized_drl_feistel(build_feistel_system(spec, (0, 0), (0, 0)))
    return H, [f.to_str() for f in H.polys], [H.ring.parse(t).to_str() for t in F13_PUBLISHED]


def criterion_7_structural():
    failures = []
    for q, r in GRID + [(11, 4), (17, 3)]:
        mimc = attack_instance("mimc", q, r, 1).system
        if not is_groebner(mimc.polys, DRL):
            failures.append(("mimc", q, r))
        two = attack_instance("two_plaintext", q, r, 1).system
        names = two.provenance["poly_names"]
        for drop in ("h1", "f1"):
            sub = [f for f, nm in zip(two.polys, names) if nm != drop]
            if not is_groebner(sub, DRL):
                failures.append(("two_plaintext", drop, q, r))
        H = downsized_drl_feistel(attack_instance("feistel", q, r, 1).system)
        if not is_groebner(H.polys, DRL):
            failures.append(("feistel_downsized", q, r))
    for rf, d in ((1, 3), (2, 3), (1, 5)):
        spec = CipherSpec("hades", 11 if d == 3 else 13, branches=2, r_f=rf, r_p=0, exponent=d, seed=rf)
        S = attack_instance("spn", spec.q, spec.rounds, 0, spec=spec).system
        if not is_groebner(spn_transform(S).polys, DRL):
            failures.append(("hades", rf, d))
    return failures


def criterion_7():
    failures = criterion_7_structural()
    _, ours, golden = f13_rendering()
    verbatim = ours == golden
    return record(7, not failures and verbatim,
                  f"structural GB failures {failures}; F13 example verbatim: {verbatim} "
                  f"(differing polys: {[i + 1 for i, (a, b) in enumerate(zip(ours, golden)) if a != b]})")


# 8: shape and quotient dimension laws

def criterion_8():
    bad = []
    for q, r in GRID + [(11, 4)]:
        sb = lex_gb_iterated(attack_instance("mimc", q, r, 2).system)
        if sb.degrees() != [3 ** i for i in range(1, r + 1)]:
            bad.append(("mimc shape", q, r))
        if quotient_dimension(buchberger(sb.polys(), "lex")) != 3 ** r:
            bad.append(("mimc quotient", q, r))
        F = attack_instance("feistel", q, r, 2).system
        if lex_gb_feistel(F).degrees() != [3 ** i for i in range(1, r + 1)]:
            bad.append(("feistel shape", q, r))
        H = downsized_drl_feistel(F)
        if quotient_dimension(H.polys) != 3 ** r:
            bad.append(("feistel quotient", q, r))
    for q, d, rf, rp in ((11, 3, 1, 1), (11, 3, 1, 0), (13, 5, 1, 0), (5, 3, 1, 2)):
        spec = CipherSpec("hades", q, branches=2, r_f=rf, r_p=rp, exponent=d, seed=1)
        S = eliminate_linear(spn_transform(attack_instance("spn", q, spec.rounds, 0, spec=spec).system))
        if quotient_dimension(buchberger(S.polys, DRL)) != d ** (2 * 2 * rf + rp):
            bad.append(("hades quotient", q, d, rf, rp))
    return record(8, not bad, f"violations {bad}")


# 9: key recovery

def criterion_9():
    total, hits, unique, pair_total = 0, 0, 0, 0
    for model in DESK_MODELS:
        for q, r in ((11, 2), (11, 3), (17, 3), (23, 2), (23, 3), (29, 3), (29, 4)):
            for seed in range(2):
                inst = attack_instance(model, q, r, seed)
                res = recover_key(inst.system)
                target = inst.truth["message"] if model == "hash" else inst.truth["key"]
                total += 1
                hits += target in res.keys
                if model in ("two_plaintext", "feistel"):
                    pair_total += 1
                    unique += len(res.keys) == 1
    rate = unique / pair_total
    ok = total >= 50 and hits == total
    return record(9, ok, f"true key recovered in {hits}/{total} instances; singleton sets "
                         f"{unique}/{pair_total} = {rate:.0%} for two-plaintext/Feistel "
                         f"(soft threshold 80%: {'met' if rate >= 0.8 else 'not met'})")


# 10: genericity

def criterion_10():
    certified, bad = [], []
    for q, r in GRID:
        for model in ("mimc", "two_plaintext"):
            S = attack_instance(model, q, r, 3).system
            rep = is_generic_coordinates(S, "pure_powers")
            (certified if rep.generic else bad).append((model, q, r, S))
    for rf, rp in ((1, 1), (1, 2), (2, 0)):
        spec = CipherSpec("hades", 11, branches=2, r_f=rf, r_p=rp, seed=4)
        S = attack_instance("spn", 11, spec.rounds, 0, spec=spec).system
        rep = spn_genericity(S)
        (certified if rep.generic else bad).append(("hades", rf, rp, S))
    sponge = is_generic_coordinates(sponge_example_f5(), "pure_powers").verdict
    over = []
    for *tag, S in certified:
        bound = macaulay_bound(S.degrees(), S.ring.nvars)
        sd = solving_degree(S, d_max=bound + 1)
        if sd.degree is None or sd.degree > bound:
            over.append(tuple(tag))
    ok = not bad and sponge == "not_generic" and not over
    return record(10, ok, f"{len(certified)} instances certified generic, uncertified {[b[:3] for b in bad]}; "
                          f"sponge example: {sponge}; solvdeg above Macaulay bound: {over}")


# pytest entry points

def test_criterion_1():
    assert criterion_1()


def test_criterion_1_cli(capsys):
    assert cli_main(["tables", "--which", "gmimc"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert len(rows) == 6 and all(abs(float(r.split(",")[4]) - float(r.split(",")[3])) <= 0.5 for r in rows)


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


def test_criterion_4():
    assert criterion_4()


def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


def test_criterion_7():
    assert criterion_7()


def test_criterion_7_structural_part():
    assert criterion_7_structural() == []


def test_f13_example_over_f5():
    # the printed coefficients (-2 for 3) are consistent with F_5; there the basis matches up to
    # reducing x_{R,2} -> y^3 in the third polynomial, and both lists generate the same ideal
    H, ours, golden = f13_rendering(5)
    assert [a == b for a, b in zip(ours, golden)] == [True, True, False, True]
    P = [H.ring.parse(t) for t in F13_PUBLISHED]
    assert same_ideal(buchberger(P, DRL), buchberger(H.polys, DRL))


def test_criterion_8():
    assert criterion_8()


def test_criterion_9():
    assert criterion_9()


def test_criterion_10():
    assert criterion_10()


if __name__ == "__main__":
    crits = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
             criterion_8, criterion_9, criterion_10]
    results = [c() for c in crits]
    sys.exit(0 if all(results) else 1)
