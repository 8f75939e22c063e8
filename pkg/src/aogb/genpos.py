"""Generic-coordinates checks and the degree of regularity."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .groebner import BudgetExceeded, buchberger, hilbert_polynomial_part, quotient_dimension
from .linalg import rank_mod, rref_mod
from .mpoly import DRL, Polynomial
from .systems import CipherSpec, PolySystem, build_spn_system, gmimc_erf_transform, spn_transform

VERDICTS = ("generic", "not_generic", "indeterminate")


@dataclass
class GenericityReport:
    verdict: str
    method: str
    witness: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def generic(self) -> bool:
        return self.verdict == "generic"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "method": self.method, "witness": self.witness,
                "seconds": round(self.seconds, 6)}


def top_component_system(sys: PolySystem) -> PolySystem:
    tops = [f.top_component() for f in sys.polys]
    return sys.replace([t for t in tops if not t.is_zero()], note="top_component", blocks=None)


def _preconditions(sys: PolySystem, pair_budget: int):
    """None when (F) is proper and zero-dimensional, else a reason string."""
    try:
        gb = buchberger(sys.polys, DRL, pair_budget=pair_budget)
    except BudgetExceeded:
        return "precondition check exceeded its budget"
    if any(f.degree() == 0 for f in gb.polys):
        return "the ideal is the unit ideal"
    if quotient_dimension(gb) == math.inf:
        return "the ideal is not zero-dimensional"
    return None


def _pure_powers(sys: PolySystem, pair_budget: int) -> GenericityReport:
    top = top_component_system(sys)
    gb = buchberger(top.polys, DRL, pair_budget=pair_budget)
    R = sys.ring
    degs = {}
    for i, v in enumerate(R.variables):
        ds = [f.lm()[i] for f in gb.polys if f.lm()[i] > 0 and sum(f.lm()) == f.lm()[i]]
        degs[v] = min(ds) if ds else None
    missing = [v for v, d in degs.items() if d is None]
    verdict = "generic" if not missing else "not_generic"
    return GenericityReport(verdict, "pure_powers", {"pure_power_degrees": degs, "missing": missing})


# linear forms are dense coefficient vectors over the ring variables

def _as_power_of_linear(f: Polynomial):
    """(c, L, e) with f = c*L^e for a linear form L (as a vector), else None."""
    R, q = f.ring, f.ring.q
    if f.is_zero() or not f.is_homogeneous():
        return None
    e = f.degree()
    if e == 1:
        L = [0] * R.nvars
        for m, c in f.terms.items():
            L[m.index(1)] = c
        return 1, L, 1
    if e % q == 0:
        return None
    for v in range(R.nvars):
        cv = f.coeff(R.var_mono(v, e))
        if not cv:
            continue
        # f = cv * (x_v + sum a_j x_j)^e, read a_j off x_v^{e-1} x_j
        inv = pow(cv * e % q, q - 2, q)
        L = [0] * R.nvars
        L[v] = 1
        for j in range(R.nvars):
            if j != v:
                m = list(R.var_mono(v, e - 1))
                m[j] += 1
                L[j] = f.coeff(tuple(m)) * inv % q
        lin = Polynomial(R, {R.var_mono(j): a for j, a in enumerate(L) if a})
        if lin ** e * cv == f:
            return cv, L, e
        return None
    return None


class _Span:
    """Row-reduced span of linear forms; reduce() substitutes the pivot variables."""

    def __init__(self, ring):
        self.ring = ring
        self.rows: list[list[int]] = []
        self.piv: list[int] = []

    def rank(self) -> int:
        return len(self.rows)

    def add(self, L) -> bool:
        q = self.ring.q
        L = self._reduce_vec(list(L))
        nz = [j for j, a in enumerate(L) if a]
        if not nz:
            return False
        p = nz[0]
        inv = pow(L[p], q - 2, q)
        L = [a * inv % q for a in L]
        for k, row in enumerate(self.rows):
            if row[p]:
                c = row[p]
                self.rows[k] = [(a - c * b) % q for a, b in zip(row, L)]
        self.rows.append(L)
        self.piv.append(p)
        return True

    def _reduce_vec(self, L):
        q = self.ring.q
        for row, p in zip(self.rows, self.piv):
            if L[p]:
                c = L[p]
                L = [(a - c * b) % q for a, b in zip(L, row)]
        return L

    def reduce(self, f: Polynomial) -> Polynomial:
        if not self.rows:
            return f
        R, q = self.ring, self.ring.q
        sub = {}
        for row, p in zip(self.rows, self.piv):
            sub[p] = Polynomial(R, {R.var_mono(j): (-a) % q for j, a in enumerate(row) if a and j != p})
        return f.substitute(sub)


def linear_closure(polys, ring) -> tuple[_Span, list]:
    """Collect linear forms L with c*L^e in the top components modulo the forms found so far."""
    span = _Span(ring)
    pending = [f.top_component() for f in polys]
    trail = []
    changed = True
    while changed:
        changed = False
        rest = []
        for f in pending:
            g = span.reduce(f)
            if g.is_zero():
                continue
            hit = _as_power_of_linear(g)
            if hit is not None and span.add(hit[1]):
                trail.append({"degree": hit[2], "form": g.to_str() if hit[2] == 1 else f"({_vec_str(ring, hit[1])})^{hit[2]}"})
                changed = True
            else:
                rest.append(f)
        pending = rest
    return span, trail


def _vec_str(ring, L) -> str:
    return Polynomial(ring, {ring.var_mono(j): a for j, a in enumerate(L) if a}).to_str()


def _substitution(sys: PolySystem) -> GenericityReport:
    span, trail = linear_closure(sys.polys, sys.ring)
    n = sys.ring.nvars
    verdict = "generic" if span.rank() == n else "indeterminate"
    stalled = [sys.ring.variables[j] for j in range(n) if j not in span.piv]
    return GenericityReport(verdict, "substitution_procedure",
                            {"rank": span.rank(), "required": n, "steps": len(trail), "unresolved": stalled})


def is_generic_coordinates(sys: PolySystem, method: str = "pure_powers", pair_budget: int = 20000,
                           check_preconditions: bool = True) -> GenericityReport:
    t0 = time.perf_counter()
    if method == "spn_structure":
        rep = spn_genericity(sys)
    else:
        reason = _preconditions(sys, pair_budget) if check_preconditions else None
        if reason:
            rep = GenericityReport("indeterminate", method, {"reason": reason})
        elif method == "pure_powers":
            rep = _pure_powers(sys, pair_budget)
        elif method == "substitution_procedure":
            rep = _substitution(sys)
        else:
            raise ValueError(f"unknown method {method!r}")
    rep.seconds = time.perf_counter() - t0
    return rep


def _block_echelon(sys: PolySystem) -> list[Polynomial]:
    """Row-reduce the span of each round block (DRL columns); invariant under
    invertible recombination within a block."""
    out = []
    R, q = sys.ring, sys.ring.q
    for blk in sys.blocks:
        polys = [sys.polys[k] for k in blk]
        monos = DRL.sort_desc({m for f in polys for m in f.terms})
        col = {m: j for j, m in enumerate(monos)}
        A = np.zeros((len(polys), len(monos)), dtype=np.int64)
        for i, f in enumerate(polys):
            for m, c in f.terms.items():
                A[i, col[m]] = c
        E, piv = rref_mod(A, q)
        for i in range(len(piv)):
            out.append(Polynomial(R, {monos[j]: int(E[i, j]) for j in np.nonzero(E[i])[0]}))
    return out


def spn_genericity(sys: PolySystem) -> GenericityReport:
    """Pure-power, pairwise coprime leading monomials after block-wise echelon form."""
    t0 = time.perf_counter()
    spec = sys.spec
    if spec is None or spec.family != "hades" or sys.blocks is None:
        return GenericityReport("indeterminate", "spn_structure", {"reason": "not an SPN system"},
                                time.perf_counter() - t0)
    if spec.partial_round(1) or spec.exponent <= 1:
        return GenericityReport("indeterminate", "spn_structure",
                                {"reason": "first round is not a full SPN round"}, time.perf_counter() - t0)
    G = _block_echelon(sys)
    R = sys.ring
    lms = [f.lm() for f in G]
    degs = {}
    for m in lms:
        vs = [i for i, e in enumerate(m) if e]
        if len(vs) != 1:
            return GenericityReport("indeterminate", "spn_structure",
                                    {"reason": f"leading monomial {R.mono_str(m)} is not a pure power"},
                                    time.perf_counter() - t0)
        v = R.variables[vs[0]]
        if v in degs:
            return GenericityReport("indeterminate", "spn_structure",
                                    {"reason": f"two leading monomials in {v}"}, time.perf_counter() - t0)
        degs[v] = m[vs[0]]
    missing = [v for v in R.variables if v not in degs]
    verdict = "generic" if not missing else "indeterminate"
    return GenericityReport(verdict, "spn_structure", {"pure_power_degrees": degs, "missing": missing},
                            time.perf_counter() - t0)


RANK_VARIANTS = {"erf": "gmimc_erf", "crf": "gmimc_crf", "strong_crf": "feistel_scrf"}


def required_rank(variant: str, n: int, r: int) -> int:
    return {"erf": r * (n - 1), "strong_crf": r, "crf": r * n}[variant]


def feistel_rank_criterion(spec: CipherSpec, variant: str | None = None) -> GenericityReport:
    """Rank of the linear system left after the nonlinear top components are forced to vanish.

    The nonlinear top components of the transformed system are powers of linear
    forms; the criterion holds iff these forms together with the linear
    polynomials span all variables.  ``achieved`` counts the rank beyond the
    forms coming from nonlinear components, to compare with the required rank."""
    t0 = time.perf_counter()
    if variant is None:
        variant = {v: k for k, v in RANK_VARIANTS.items()}.get(spec.family)
    if variant not in RANK_VARIANTS:
        raise ValueError(f"unsupported variant {variant!r}")
    family = RANK_VARIANTS[variant]
    if spec.family != family:
        spec = CipherSpec(family, spec.q, rounds=spec.rounds, branches=spec.branches, exponent=spec.exponent,
                          seed=spec.seed, layer=spec.layer, key_schedule=spec.key_schedule)
    n, r = spec.branches, spec.rounds
    if n < 2:
        raise ValueError("Feistel criteria need at least two branches")
    zeros = [0] * n
    sys = build_spn_system(spec, zeros, zeros)
    G = gmimc_erf_transform(sys) if variant == "erf" else spn_transform(sys)
    nonlinear, linear = [], []
    for f in G.polys:
        t = f.top_component()
        if t.is_zero():
            continue
        (nonlinear if t.degree() > 1 else linear).append(t)
    q, N = sys.ring.q, sys.ring.nvars
    forms = []
    for t in nonlinear:
        hit = _as_power_of_linear(t)
        if hit is None:
            return GenericityReport("indeterminate", "rank_criterion",
                                    {"reason": "a nonlinear top component is not a power of a linear form"},
                                    time.perf_counter() - t0)
        forms.append(hit[1])
    lin = []
    for t in linear:
        L = [0] * N
        for m, c in t.terms.items():
            L[m.index(1)] = c
        lin.append(L)
    rk_forms = rank_mod(np.array(forms, dtype=np.int64), q) if forms else 0
    rk = rank_mod(np.array(forms + lin, dtype=np.int64), q) if forms or lin else 0
    req = required_rank(variant, n, r)
    achieved = rk - (N - req)
    verdict = "generic" if rk == N else "indeterminate"
    return GenericityReport(verdict, "rank_criterion",
                            {"variant": variant, "n": n, "r": r, "q": q, "layer": spec.layer,
                             "key_schedule": spec.key_schedule, "rank": achieved, "required": req,
                             "full_rank": rk == N, "forced_forms_rank": rk_forms, "nvars": N},
                            time.perf_counter() - t0)


def degree_of_regularity(sys: PolySystem, pair_budget: int = 20000):
    """deg(h) + 1 for the Hilbert series numerator h of the top-component ideal; inf if not finite."""
    top = top_component_system(sys)
    if not top.polys:
        return math.inf
    gb = buchberger(top.polys, DRL, pair_budget=pair_budget)
    lms = [f.lm() for f in gb.polys]
    h = hilbert_polynomial_part(lms, sys.ring.nvars)
    if h is None:
        return math.inf
    return len(h)
