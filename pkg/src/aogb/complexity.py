"""Closed-form solving-degree bounds and bit-complexity estimates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

OMEGA = 2.0

ATTACKS = ("field_eq", "two_plaintext", "feistel", "hash", "hades", "gmimc")


def macaulay_bound(degrees, nvars: int) -> int:
    """d_1 + ... + d_l - l + 1 over the l = min(n+1, m) largest degrees."""
    degs = sorted((int(d) for d in degrees), reverse=True)
    if not degs:
        raise ValueError("empty degree list")
    l = min(nvars + 1, len(degs))
    return sum(degs[:l]) - l + 1


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def kappa_bits(n: int, d: int, omega: float = OMEGA) -> float:
    """omega * log2 binom(n+d-1, d) via the entropy approximation."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    N = n + d - 1
    return omega * (0.5 * math.log2(N / (math.pi * d * (n - 1))) + N * binary_entropy(d / N))


def log2_binomial(n: int, k: int) -> float:
    return math.log2(math.comb(n, k))


def field_eq_remainder_degree(log2q: float) -> int:
    """Empirical deg(r_y) <= 2 * ceil(log_3 q)."""
    return 2 * math.ceil(log2q / math.log2(3) - 1e-12)


@dataclass
class AttackParams:
    """Parameters of an estimate; the field enters only through log2(q)."""
    attack: str
    rounds: int = 0
    log2q: float = 64.0
    branches: int = 2
    exponent: int = 3
    r_f: int = 0
    r_p: int = 0
    samples: int = 1
    variant: str = "crf"

    def __post_init__(self):
        if self.attack not in ATTACKS:
            raise ValueError(f"unknown attack {self.attack!r}")


@dataclass
class ComplexityReport:
    attack: str
    nvars: int
    solving_degree_bound: int
    omega: float
    kappa_bits: float
    aux: dict = field(default_factory=dict)
    provenance: str = ""

    def to_json(self) -> dict:
        out = asdict(self)
        out["kappa_bits"] = round(self.kappa_bits, 4)
        return out


def attack_dimensions(p: AttackParams) -> tuple[int, int, str]:
    """(number of variables, solving degree bound, description)."""
    r, d = p.rounds, p.exponent
    if p.attack == "field_eq":
        dr = field_eq_remainder_degree(p.log2q)
        return r, dr + 2 * r, "MiMC + remainder of y^q - y: d = deg(r_y) + 2r, n = r"
    if p.attack == "two_plaintext":
        return 2 * r - 1, 4 * r + 1, "MiMC two plain/ciphertext pairs: d = 4r + 1, n = 2r - 1"
    if p.attack == "feistel":
        return r, 2 * r + 1, "Feistel-MiMC downsized system: d = 2r + 1, n = r"
    if p.attack == "hash":
        dr = field_eq_remainder_degree(p.log2q)
        return r - 1, dr + 2 * r - 2, "Feistel-MiMC-Hash + remainder of x2^q - x2: d = deg(r) + 2r - 2, n = r - 1"
    if p.attack == "hades":
        nv = 2 * p.branches * p.r_f + p.r_p
        return nv, (d - 1) * nv + 1, "Hades after elimination: n = 2 n r_f + r_p, d = (d-1) n + 1"
    if p.attack == "gmimc":
        return r, (d - 1) * r + 1, "GMiMC after elimination: n = r, d = (d-1) r + 1"
    raise ValueError(p.attack)


def quotient_dim_log2(family: str, rounds: int = 0, exponent: int = 3, branches: int = 2,
                      r_f: int = 0, r_p: int = 0) -> float:
    """log2 of the quotient space dimension: 3^r for MiMC, d^{2 n r_f + r_p} for Hades."""
    if family in ("mimc", "field_eq", "feistel", "feistel_mimc", "hash", "feistel_hash"):
        return rounds * math.log2(exponent)
    if family == "hades":
        return (2 * branches * r_f + r_p) * math.log2(exponent)
    raise ValueError(f"no quotient dimension formula for {family!r}")


def estimate_attack(p: AttackParams, omega: float = OMEGA) -> ComplexityReport:
    n, d, how = attack_dimensions(p)
    aux = {"macaulay_bound": d}
    if p.attack in ("field_eq", "hash", "feistel"):
        aux["quotient_dim_log2"] = quotient_dim_log2(p.attack, p.rounds, p.exponent)
    if p.attack == "hades":
        aux["quotient_dim_log2"] = quotient_dim_log2("hades", exponent=p.exponent, branches=p.branches,
                                                     r_f=p.r_f, r_p=p.r_p)
    return ComplexityReport(p.attack, n, d, omega, kappa_bits(n, d, omega), aux, how)


def estimate_established(p: AttackParams, omega: float = OMEGA) -> ComplexityReport:
    """Best previously known attack, composed as log2 of the dominant costs.

    MiMC, Feistel and hash: probabilistic FGLM n * D^omega with D = 3^r (n = r),
    run once per sample, plus the factoring/gcd term D * log q * log D.
    Hades: the Groebner estimate itself.  GMiMC: omega * log2 binom(n + D, n)
    with D = d^{r - 2n + 2} (crf) or d^{r - n} (erf)."""
    r = p.rounds
    if p.attack in ("field_eq", "two_plaintext", "feistel", "hash"):
        runs = 2 if p.attack == "two_plaintext" or p.samples == 2 else 1
        log_D = r * math.log2(p.exponent)
        fglm = math.log2(r) + omega * log_D
        factor = log_D + math.log2(p.log2q) + math.log2(log_D)
        total = math.log2(runs * 2 ** fglm + 2 ** factor)
        return ComplexityReport(p.attack, r, 3 ** r if r < 40 else -1, omega, total,
                                {"fglm_bits": fglm, "fglm_runs": runs, "gcd_bits": factor},
                                "log2(runs * n * D^omega + D log q log D), D = 3^r, n = r")
    if p.attack == "hades":
        rep = estimate_attack(p, omega)
        rep.provenance = "established estimate coincides with the Macaulay-bound estimate"
        return rep
    if p.attack == "gmimc":
        n = p.branches
        e = r - 2 * n + 2 if p.variant == "crf" else r - n
        D = p.exponent ** e
        bits = omega * log2_binomial(n + D, n)
        return ComplexityReport(p.attack, n, D, omega, bits, {"variant": p.variant},
                                f"omega * log2 binom(n + D, n), D = d^{e}")
    raise ValueError(p.attack)


# published golden values for each complexity table

@dataclass
class TableCell:
    table: str
    label: str
    params: AttackParams
    column: str  # "groebner" or "established"
    golden: float
    note: str = ""


def _mimc(log2q, r):
    return AttackParams("field_eq", r, log2q)


def table_cells() -> list[TableCell]:
    cells: list[TableCell] = []
    add = cells.append
    # dedicated tables
    for log2q, r, v in ((64, 50, 337.5), (128, 81, 572.4), (256, 162, 1156.2)):
        add(TableCell("mimc", f"log2q={log2q} r={r}", _mimc(log2q, r), "groebner", v))
    for r, v in ((10, 99.4), (50, 538.1)):
        add(TableCell("two_plaintext", f"r={r}", AttackParams("two_plaintext", r), "groebner", v))
    for r, v in ((10, 48.6), (50, 266.7)):
        add(TableCell("feistel", f"r={r}", AttackParams("feistel", r), "groebner", v))
    for d, rf, rp, v in ((3, 3, 13, 130.0), (3, 4, 10, 135.4), (3, 5, 5, 130.0),
                         (5, 3, 10, 149.0), (5, 4, 10, 177.6), (5, 5, 4, 163.3)):
        add(TableCell("hades", f"d={d} r_f={rf} r_p={rp}",
                      AttackParams("hades", 2 * rf + rp, exponent=d, branches=2, r_f=rf, r_p=rp), "groebner", v))
    for d, r, v in ((3, 10, 48.6), (3, 25, 130.0), (3, 50, 266.7), (5, 10, 63.5), (5, 25, 170.5), (5, 50, 350.0)):
        add(TableCell("gmimc", f"d={d} r={r}", AttackParams("gmimc", r, exponent=d), "groebner", v))
    # comparison table
    t = "comparison"
    for log2q, r, g, e in ((64, 50, 337.5, 164.1), (128, 81, 527.4, 263.1), (256, 162, 1156.2, 520.9)):
        note = "572.4 is the value published for the same parameters in the MiMC table" if g == 527.4 else ""
        add(TableCell(t, f"MiMC log2q={log2q} r={r}", _mimc(log2q, r), "groebner", g, note))
        add(TableCell(t, f"MiMC log2q={log2q} r={r}", _mimc(log2q, r), "established", e))
    for r, g, e in ((10, 99.4, 36.0), (50, 538.1, 165.1)):
        add(TableCell(t, f"MiMC r={r} m=2", AttackParams("two_plaintext", r), "groebner", g))
        add(TableCell(t, f"MiMC r={r} m=2", AttackParams("two_plaintext", r, samples=2), "established", e))
    for r, g, e in ((10, 48.6, 35.0), (50, 266.7, 164.1)):
        add(TableCell(t, f"MiMC-2n/n r={r}", AttackParams("feistel", r), "groebner", g))
        add(TableCell(t, f"MiMC-2n/n r={r}", AttackParams("feistel", r), "established", e))
    for log2q, r, g, e in ((64, 51, 337.5, 167.3), (128, 82, 527.4, 266.2), (256, 163, 1156.2, 524.0)):
        note = "same parameters as the 572.4 MiMC cell; the hash row repeats 527.4" if g == 527.4 else ""
        add(TableCell(t, f"Hash log2q={log2q} r={r}", AttackParams("hash", r, log2q), "groebner", g, note))
        add(TableCell(t, f"Hash log2q={log2q} r={r}", AttackParams("hash", r, log2q), "established", e))
    for rf, rp, d, v in ((3, 13, 3, 130.0), (4, 10, 3, 135.4), (5, 5, 3, 130.0),
                         (3, 10, 5, 149.0), (4, 10, 5, 177.5), (5, 4, 5, 163.3)):
        p = AttackParams("hades", 2 * rf + rp, exponent=d, branches=2, r_f=rf, r_p=rp)
        add(TableCell(t, f"Hades r_f={rf} r_p={rp} d={d}", p, "groebner", v))
        add(TableCell(t, f"Hades r_f={rf} r_p={rp} d={d}", p, "established", v))
    for r, d, g, crf, erf in ((10, 3, 48.6, 51.9, 61.4), (25, 3, 130.0, 194.5, 204.0), (50, 3, 266.7, 432.3, 441.8),
                              (10, 5, 63.5, 78.4, 92.4), (25, 5, 170.5, 287.4, 301.3), (50, 5, 350.0, 635.7, 649.6)):
        add(TableCell(t, f"GMiMC r={r} n=3 d={d}", AttackParams("gmimc", r, exponent=d, branches=3), "groebner", g))
        for var, v in (("crf", crf), ("erf", erf)):
            add(TableCell(t, f"GMiMC r={r} n=3 d={d} {var}",
                          AttackParams("gmimc", r, exponent=d, branches=3, variant=var), "established", v))
    return cells


TABLES = ("mimc", "two_plaintext", "feistel", "hades", "gmimc", "comparison")
TOLERANCE = {"groebner": 0.5, "established": 1.0}


@dataclass
class TableRow:
    table: str
    label: str
    column: str
    golden: float
    computed: float
    delta: float
    within: bool
    note: str

    def csv(self) -> list:
        return [self.table, self.label, self.column, f"{self.golden:.1f}", f"{self.computed:.1f}",
                f"{self.delta:+.2f}", "yes" if self.within else "no", self.note]


CSV_HEADER = ["table", "parameters", "column", "golden_bits", "computed_bits", "delta", "within_tolerance", "note"]


def reproduce_tables(which: str = "all", omega: float = OMEGA) -> list[TableRow]:
    rows = []
    for c in table_cells():
        if which != "all" and c.table != which:
            continue
        rep = estimate_attack(c.params, omega) if c.column == "groebner" else estimate_established(c.params, omega)
        delta = rep.kappa_bits - c.golden
        rows.append(TableRow(c.table, c.label, c.column, c.golden, rep.kappa_bits, delta,
                             abs(delta) <= TOLERANCE[c.column], c.note))
    return rows


# desk-scale solving degrees

def desk_solving_degree(model: str, q: int, r: int) -> dict:
    """Observed small-scale law and proven upper bound for the measured solving degree."""
    laws = {
        "field_eq": (q + 2 * r - 1, q + 2 * r),
        "two_plaintext": (4 * r, 4 * r + 1),
        "feistel": (2 * r, 2 * r + 1),
        "feistel_downsized": (2 * r, 2 * r + 1),
        "hash": (q + 2 * r - 3, q + 2 * r - 2),
    }
    if model not in laws:
        raise ValueError(f"no desk-scale law for {model!r}")
    expected, upper = laws[model]
    return {"expected": expected, "upper_bound": upper}
