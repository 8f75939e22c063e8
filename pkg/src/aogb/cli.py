"""Command-line front end: build systems, solve them, measure degrees, check genericity, estimate costs.

Exit status: 0 success, 1 malformed input, 2 hypothesis or precondition failure, 3 budget exhausted.
Reports are deterministic given the arguments and seed; timings are omitted unless --timing is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import fields

from . import __version__
from .complexity import (CSV_HEADER, TABLES, AttackParams, desk_solving_degree, estimate_attack,
                         estimate_established, macaulay_bound, reproduce_tables)
from .degfall import (NotInIdeal, conjecture_harness, last_fall_degree, witness_feistel, witness_hash,
                      witness_mimc_field_eq, witness_mimc_remainder)
from .genpos import RANK_VARIANTS, feistel_rank_criterion, is_generic_coordinates
from .groebner import BudgetExceeded, solving_degree
from .shapelex import HypothesisError, recover_key
from .systems import (ATTACK_MODELS, CipherSpec, apply_round_matrices, attack_instance, eliminate_linear,
                      gmimc_erf_transform, spn_transform, sponge_example_f5)

OUTPUT_DIR_ENV = "AOGB_OUTPUT_DIR"


class InputError(ValueError):
    """Malformed or inconsistent configuration (exit status 1)."""


class BudgetExhausted(RuntimeError):
    """A budget ran out before the computation finished (exit status 3)."""


# configuration

_INT_FIELDS = {"q", "rounds", "branches", "exponent", "seed", "r_f", "r_p"}
_STR_FIELDS = {"family", "layer", "key_schedule"}


def _load_json(text: str, what: str):
    source = text
    if not text.lstrip().startswith(("{", "[")):
        try:
            with open(text) as fh:
                source = fh.read()
        except OSError as e:
            raise InputError(f"{what}: cannot read {text!r}: {e.strerror}") from None
    try:
        return json.loads(source)
    except json.JSONDecodeError as e:
        raise InputError(f"{what}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


def spec_from_json(data) -> CipherSpec:
    """CipherSpec from a JSON object, naming the first offending field on error."""
    if not isinstance(data, dict):
        raise InputError("spec: expected a JSON object")
    known = {f.name for f in fields(CipherSpec)}
    for key, val in data.items():
        if key not in known:
            raise InputError(f"spec.{key}: unknown field")
        if key in _INT_FIELDS and (not isinstance(val, int) or isinstance(val, bool)):
            raise InputError(f"spec.{key}: expected an integer, got {json.dumps(val)}")
        if key in _STR_FIELDS and not isinstance(val, str):
            raise InputError(f"spec.{key}: expected a string, got {json.dumps(val)}")
        if key == "round_constants" and val is not None and not isinstance(val, list):
            raise InputError("spec.round_constants: expected a list")
    for key in ("family", "q"):
        if key not in data:
            raise InputError(f"spec.{key}: required field missing")
    try:
        return CipherSpec(**data)
    except (ValueError, TypeError) as e:
        raise InputError(f"spec: {e}") from None


def spec_from_args(a) -> CipherSpec | None:
    if a.spec:
        return spec_from_json(_load_json(a.spec, "spec"))
    if not a.family:
        return None
    data = {"family": a.family, "q": a.q, "seed": a.seed, "exponent": a.d, "layer": a.layer,
            "key_schedule": a.key_schedule}
    if a.family == "hades":
        data.update(r_f=a.r_f, r_p=a.r_p, branches=a.n)
    else:
        data["rounds"] = a.r
        if a.family not in ("mimc", "feistel_mimc", "feistel_hash"):
            data["branches"] = a.n
    return spec_from_json(data)


def _default_model(spec: CipherSpec, field_eq: str) -> str:
    if spec.family == "mimc":
        return "field_eq" if field_eq == "key" else "mimc"
    if spec.family == "feistel_mimc":
        return "feistel"
    if spec.family == "feistel_hash":
        return "hash"
    return "spn"


def _transform(S, how: str):
    if how == "none":
        return S
    if how == "spn":
        return spn_transform(S)
    if how == "erf":
        return gmimc_erf_transform(S)
    if how == "rounds":
        return apply_round_matrices(S)
    if how == "eliminate":
        return eliminate_linear(spn_transform(S)) if S.spec and S.spec.multibranch else eliminate_linear(S)
    raise InputError(f"--transform: unknown transform {how!r}")


def instance_from_args(a):
    spec = spec_from_args(a)
    if spec is None:
        raise InputError("give --spec or --family")
    model = a.model or _default_model(spec, a.field_eq)
    if model not in ATTACK_MODELS:
        raise InputError(f"--model: unknown attack model {model!r}")
    try:
        inst = attack_instance(model, spec.q, spec.rounds, a.seed, spec.exponent, spec=spec)
    except ValueError as e:
        raise InputError(str(e)) from None
    inst.system = _transform(inst.system, a.transform)
    return inst


# commands

def cmd_build(a) -> dict:
    inst = instance_from_args(a)
    return {"spec": inst.spec.to_json(), **inst.to_json()}


def cmd_solve(a) -> dict:
    inst = instance_from_args(a)
    if inst.model not in ("field_eq", "two_plaintext", "feistel", "hash"):
        raise HypothesisError(f"key recovery is implemented for MiMC, Feistel and hash models, not {inst.model!r}")
    res = recover_key(inst.system)
    target = inst.truth["message"] if inst.model == "hash" else inst.truth["key"]
    return {"model": inst.model, "truth": inst.truth, **res.to_json(), "true_key_recovered": target in res.keys}


def cmd_solvdeg(a) -> dict:
    inst = instance_from_args(a)
    S = inst.system
    bound = macaulay_bound(S.degrees(), S.ring.nvars)
    d_max = a.d_max if a.d_max is not None else bound + 1
    res = solving_degree(S, d_max=d_max, time_budget=a.time_budget)
    out = {"model": inst.model, "nvars": S.ring.nvars, "degrees": S.degrees(), "macaulay_bound": bound,
           "d_max": d_max, **res.to_json()}
    out.pop("gb")
    try:
        out["desk_law"] = desk_solving_degree(inst.model, S.ring.q, inst.spec.rounds)
    except ValueError:
        pass
    if res.exhausted:
        raise BudgetExhausted(json.dumps(out))
    return out


def cmd_lastfall(a) -> dict:
    inst = instance_from_args(a)
    S = inst.system
    res = last_fall_degree(S, d_max=a.d_max)
    return {"model": inst.model, "nvars": S.ring.nvars, "degrees": S.degrees(),
            "macaulay_bound": macaulay_bound(S.degrees(), S.ring.nvars), **res.to_json()}


def cmd_generic_check(a) -> dict:
    if a.example == "sponge_f5":
        rep = is_generic_coordinates(sponge_example_f5(), a.method or "pure_powers", a.pair_budget)
    else:
        spec = spec_from_args(a)
        if spec is None:
            raise InputError("give --spec, --family or --example")
        if a.method is None and spec.family in RANK_VARIANTS.values():
            variant = a.variant or {v: k for k, v in RANK_VARIANTS.items()}[spec.family]
            rep = feistel_rank_criterion(spec, variant)
        else:
            inst = instance_from_args(a)
            method = a.method or ("spn_structure" if spec.family == "hades" else "pure_powers")
            rep = is_generic_coordinates(inst.system, method, a.pair_budget)
    out = rep.to_json()
    out["certified"] = rep.verdict == "generic"
    return out


def cmd_estimate(a) -> dict:
    try:
        p = AttackParams(a.attack, a.r, a.log2q, a.n, a.d, a.r_f, a.r_p, a.samples, a.variant)
        ours = estimate_attack(p, a.omega)
        known = estimate_established(p, a.omega)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {"params": vars(p), "groebner": ours.to_json(), "established": known.to_json()}


def cmd_tables(a) -> dict:
    rows = reproduce_tables(a.which, a.omega)
    return {"which": a.which, "omega": a.omega, "rows": [dict(zip(CSV_HEADER, r.csv())) for r in rows],
            "all_within_tolerance": all(r.within for r in rows),
            "discrepancies": [dict(zip(CSV_HEADER, r.csv())) for r in rows if not r.within]}


WITNESSES = {
    "mimc_field_eq": ("field_eq", witness_mimc_field_eq),
    "mimc_remainder": ("field_eq", witness_mimc_remainder),
    "feistel": ("feistel", witness_feistel),
    "hash": ("hash", witness_hash),
}


def cmd_witness(a) -> dict:
    if a.kind == "conjecture":
        inst = instance_from_args(a)
        if inst.model not in ("mimc", "field_eq"):
            raise InputError("the conjecture harness takes a MiMC spec")
        S = inst.system
        from .systems import append_field_equations
        S = append_field_equations(S, [v for v in S.ring.variables if S.ring.gen(v) ** S.ring.q - S.ring.gen(v)
                                       not in S.polys])
        rec = conjecture_harness(S, a.d_max)
    else:
        model, fn = WITNESSES[a.kind]
        a.model = a.model or model
        inst = instance_from_args(a)
        rec = fn(inst.system, a.d_max)
    return {"model": inst.model, **rec.to_json()}


COMMANDS = {"build": cmd_build, "solve": cmd_solve, "solvdeg": cmd_solvdeg, "lastfall": cmd_lastfall,
            "generic-check": cmd_generic_check, "estimate": cmd_estimate, "tables": cmd_tables,
            "witness": cmd_witness}


# output

def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _text(command: str, result: dict) -> str:
    if command == "solvdeg":
        return str(result["solving_degree"])
    if command == "lastfall":
        return str(result["last_fall_degree"])
    if command == "generic-check":
        return "certified generic" if result["certified"] else f"not certified ({result['verdict']})"
    if command == "solve":
        return " ".join(map(str, result["recovered_keys"]))
    if command == "witness":
        return f"d_f={result['d_f']} predicted={result['predicted']} deg={result['deg_witness']}"
    if command == "estimate":
        return f"{result['groebner']['kappa_bits']:.1f} {result['established']['kappa_bits']:.1f}"
    if command == "tables":
        return "\n".join(" | ".join(map(str, r.values())) for r in result["rows"])
    return json.dumps(result, indent=2, sort_keys=True)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        if report["command"] != "tables":
            raise InputError("--output csv is only available for tables")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in report["result"]["rows"]:
            w.writerow([row[h] for h in CSV_HEADER])
        return buf.getvalue()
    return _text(report["command"], report["result"]) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aogb", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"aogb {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        p.add_argument("--seed", type=int, default=0, help="seed for constants and instances (default 0)")
        p.add_argument("--output", choices=("json", "csv", "text"), default=None)
        p.add_argument("--out", default=None, help="also write the report to this path")
        p.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
        p.add_argument("--threads", type=int, default=1, help="accepted for interface stability; runs single-threaded")
        p.add_argument("--omega", type=float, default=2.0, help="linear algebra exponent")
        if instance:
            p.add_argument("--spec", help="CipherSpec as inline JSON or a file path")
            p.add_argument("--family")
            p.add_argument("--q", type=int, default=11)
            p.add_argument("--r", type=int, default=2, help="rounds")
            p.add_argument("--n", type=int, default=2, help="branches")
            p.add_argument("--d", type=int, default=3, help="S-box exponent")
            p.add_argument("--r-f", type=int, default=1)
            p.add_argument("--r-p", type=int, default=1)
            p.add_argument("--layer", default="shift")
            p.add_argument("--key-schedule", default="none")
            p.add_argument("--model", choices=ATTACK_MODELS, default=None)
            p.add_argument("--field-eq", choices=("none", "key"), default="none",
                           help="append y^q - y to a MiMC system")
            p.add_argument("--transform", choices=("none", "spn", "erf", "rounds", "eliminate"), default="none")
            p.add_argument("--d-max", type=int, default=None)
            p.add_argument("--pair-budget", type=int, default=20000)
            p.add_argument("--time-budget", type=float, default=None, help="seconds")
        return p

    common(sub.add_parser("build", help="build a seeded polynomial system"))
    common(sub.add_parser("solve", help="recover key candidates from a seeded instance"))
    common(sub.add_parser("solvdeg", help="measure the DRL solving degree"))
    common(sub.add_parser("lastfall", help="measure the last fall degree"))
    g = common(sub.add_parser("generic-check", help="certify generic coordinates"))
    g.add_argument("--method", choices=("pure_powers", "substitution_procedure", "spn_structure"), default=None)
    g.add_argument("--variant", choices=tuple(RANK_VARIANTS), default=None)
    g.add_argument("--example", choices=("sponge_f5",), default=None)
    e = common(sub.add_parser("estimate", help="bit complexity of an attack"), instance=False)
    e.add_argument("--attack", required=True)
    e.add_argument("--log2q", type=float, default=64.0)
    e.add_argument("--r", type=int, default=10)
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--d", type=int, default=3)
    e.add_argument("--r-f", type=int, default=0)
    e.add_argument("--r-p", type=int, default=0)
    e.add_argument("--samples", type=int, default=1)
    e.add_argument("--variant", choices=("crf", "erf"), default="crf")
    t = common(sub.add_parser("tables", help="reproduce the complexity tables"), instance=False)
    t.add_argument("--which", choices=("all",) + TABLES, default="all")
    w = common(sub.add_parser("witness", help="degree-fall witness for an attack model"))
    w.add_argument("--kind", choices=tuple(WITNESSES) + ("conjecture",), required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    fmt = a.output or ("csv" if a.command == "tables" else "json")
    report = {"command": a.command, "version": __version__, "seed": a.seed, "threads": a.threads}
    status = 0
    try:
        spec = spec_from_args(a) if hasattr(a, "spec") else None
        report["spec_digest"] = spec.digest() if spec else None
        report["budgets"] = {k: getattr(a, k) for k in ("d_max", "pair_budget", "time_budget") if hasattr(a, k)}
        report["result"] = COMMANDS[a.command](a)
    except InputError as e:
        report["error"], status = {"kind": "input", "message": str(e)}, 1
    except (HypothesisError, NotInIdeal) as e:
        report["error"], status = {"kind": "hypothesis", "message": str(e)}, 2
    except BudgetExhausted as e:
        report["error"], status = {"kind": "budget", "message": "budget exhausted"}, 3
        report["result"] = json.loads(str(e))
    except BudgetExceeded as e:
        report["error"], status = {"kind": "budget", "message": str(e)}, 3
    if not a.timing:
        report = _strip_timing(report)
    if status:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        sys.stderr.write(text if fmt != "json" else "")
        if fmt == "json":
            sys.stdout.write(text)
    else:
        try:
            text = render(report, fmt)
        except InputError as e:
            sys.stderr.write(f"error: {e}\n")
            return 1
        sys.stdout.write(text)
    path = a.out
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        ext = {"json": "json", "csv": "csv", "text": "txt"}[fmt]
        path = os.path.join(os.environ[OUTPUT_DIR_ENV],
                            f"{a.command}-{report.get('spec_digest') or 'nospec'}-{a.seed}.{ext}")
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
