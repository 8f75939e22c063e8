"""Degree falls, last fall degree and the lower-bound witness polynomials."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import upoly
from .groebner import BudgetExceeded, buchberger, normal_form
from .macaulay import RowSpaceFiltration
from .mpoly import DRL, Polynomial, s_polynomial
from .shapelex import (HypothesisError, downsized_drl_feistel, field_gcd_roots, lex_gb_feistel,
                       lex_gb_iterated, substitution_solve)
from .systems import PolySystem


class NotInIdeal(ValueError):
    pass


@dataclass
class DegreeFallRecord:
    witness: Polynomial
    d_f: int | None
    deg_witness: int
    construction: str
    predicted: int | None = None
    hypotheses: dict = field(default_factory=dict)

    @property
    def has_fall(self) -> bool:
        return self.d_f is not None and self.d_f > self.deg_witness

    @property
    def confirmed(self) -> bool:
        return self.predicted is not None and self.d_f == self.predicted

    def to_json(self) -> dict:
        return {"construction": self.construction, "witness": self.witness.to_str(),
                "deg_witness": self.deg_witness, "d_f": self.d_f, "predicted": self.predicted,
                "degree_fall": self.has_fall, "confirmed": self.confirmed, "hypotheses": self.hypotheses}


def _polys(sys):
    return list(sys.polys) if hasattr(sys, "polys") else list(sys)


def membership_degree(f: Polynomial, sys, order=DRL, d_max: int = 60, check_ideal: bool = True,
                      filtration: RowSpaceFiltration | None = None) -> int | None:
    """Least d with f in the row space of M_{<=d}; None when d_max is reached."""
    if f.is_zero():
        return 0
    if check_ideal:
        gb = buchberger(_polys(sys), order)
        if not normal_form(f, gb).is_zero():
            raise NotInIdeal("the polynomial is not in the ideal")
    W = filtration or RowSpaceFiltration(sys, order)
    d = max(f.degree(), 0)
    while d <= d_max:
        W.advance_to(d)
        if W.contains(f):
            return d
        d += 1
    return None


@dataclass
class LastFallResult:
    degree: int | None
    falls: list
    scanned_to: int
    seconds: float

    def to_json(self) -> dict:
        return {"last_fall_degree": self.degree, "fall_degrees": self.falls, "scanned_to": self.scanned_to,
                "seconds": round(self.seconds, 6)}


def last_fall_degree(sys, order=DRL, d_max: int | None = None) -> LastFallResult:
    """Largest d <= d_max where W_d ∩ P_{<=d-1} is strictly larger than W_{d-1}."""
    from .complexity import macaulay_bound

    t0 = time.perf_counter()
    polys = [f for f in _polys(sys) if not f.is_zero()]
    if d_max is None:
        d_max = macaulay_bound([f.degree() for f in polys], polys[0].ring.nvars) + 2
    W = RowSpaceFiltration(polys, order)
    falls = []
    for d in range(0, d_max + 1):
        W.advance_to(d)
        if d >= 1 and W.low_history[d] != W.rank_history[d - 1]:
            falls.append(d)
    return LastFallResult(falls[-1] if falls else None, falls, d_max, time.perf_counter() - t0)


def _record(witness, sys, construction, predicted, hyp, d_max, check_ideal=True):
    if check_ideal:
        gb = buchberger(_polys(sys), DRL)
        if not normal_form(witness, gb).is_zero():
            raise NotInIdeal("witness is not in the ideal")
    d_f = membership_degree(witness, sys, DRL, d_max, check_ideal=False)
    return DegreeFallRecord(witness, d_f, witness.degree(), construction, predicted, hyp)


def _mimc_parts(sys: PolySystem):
    """(iterated polynomials, field equation) of a MiMC system with y^q - y appended."""
    R = sys.ring
    y = R.gen("y")
    fe = y ** R.q - y
    if not sys.polys or sys.polys[-1] != fe:
        raise HypothesisError("expected the key field equation y^q - y as the last polynomial")
    return list(sys.polys[:-1]), fe


def witness_mimc_field_eq(sys: PolySystem, d_max: int | None = None) -> DegreeFallRecord:
    """x^gamma * S(f_1, y^q - y) with x^gamma = prod x_i^{d_{i+1}-1}."""
    R, q = sys.ring, sys.ring.q
    F, fe = _mimc_parts(sys)
    n = len(F)
    degs = [f.degree() for f in F]
    hyp = {"degrees_at_least_2": all(d >= 2 for d in degs), "d1_at_most_q": degs[0] <= q}
    hyp["monomials"] = all(F[i].coeff(R.var_mono(R.index(f"x{i}"), degs[i])) != 0 for i in range(1, n))
    iter_sys = sys.replace(F)
    hyp["field_eq_not_in_ideal"] = not normal_form(fe, F, DRL).is_zero()
    sb = lex_gb_iterated(iter_sys, check=False)
    roots, _ = field_gcd_roots(sb.univariate, q)
    hyp["univariate_roots"] = len(roots)
    hyp["roots_below_d1"] = len(roots) < degs[0]
    if not all(v for k, v in hyp.items() if k != "univariate_roots"):
        raise HypothesisError(f"hypotheses violated: {hyp}")
    gamma = [0] * R.nvars
    for i in range(1, n):
        gamma[R.index(f"x{i}")] = degs[i] - 1
    s = s_polynomial(F[0], fe, DRL).mul_term(tuple(gamma))
    predicted = q + sum(d - 1 for d in degs[1:])
    return _record(s, sys, "mimc_field_eq", predicted, hyp, d_max or predicted + 2)


def field_equation_remainder(sys: PolySystem) -> Polynomial:
    """Monic DRL remainder r_y of y^q - y modulo the iterated polynomials."""
    F, fe = _mimc_parts(sys)
    return normal_form(fe, F, DRL).monic()


def witness_mimc_remainder(sys: PolySystem, j: int | None = None, d_max: int | None = None) -> DegreeFallRecord:
    """Degree fall of x^gamma * S(f_1, r_y) for the system F ∪ {r_y}."""
    R, q = sys.ring, sys.ring.q
    F, fe = _mimc_parts(sys)
    n = len(F)
    degs = [f.degree() for f in F]
    r_y = field_equation_remainder(sys)
    top = r_y.top_component()
    hyp = {"deg_r_y": r_y.degree(), "top_is_monomial": len(top.terms) == 1}
    if not hyp["top_is_monomial"]:
        raise HypothesisError(f"top component of r_y is not a monomial: {top}")
    m = next(iter(top.terms))
    yi = R.index("y")
    k = 0
    while k < n - 1 and m[R.index(f"x{k + 1}")] == degs[k + 1] - 1:
        k += 1
    shape_ok = m[yi] == degs[0] - 1 and all(
        m[R.index(f"x{i}")] == (degs[i] - 1 if i <= k else 0) for i in range(1, n))
    hyp["top_shape"] = R.mono_str(m)
    hyp["top_shape_ok"] = shape_ok and k <= n - 2
    if not hyp["top_shape_ok"]:
        raise HypothesisError(f"top monomial {R.mono_str(m)} does not have the required shape")
    j = k + 1 if j is None else j
    if j < k + 1 or j > n - 1:
        raise HypothesisError("j must satisfy k + 1 <= j <= n - 1")
    sb = lex_gb_iterated(sys.replace(F), check=False)
    _, gdeg = field_gcd_roots(sb.univariate, q)
    prod_j = 1
    for d in degs[:j]:
        prod_j *= d
    hyp["gcd_degree"] = gdeg
    hyp["gcd_condition"] = gdeg < prod_j - 1
    if not hyp["gcd_condition"]:
        raise HypothesisError(f"gcd degree {gdeg} is not below {prod_j - 1}")
    gamma = [0] * R.nvars
    for i in range(j, n):
        gamma[R.index(f"x{i}")] = degs[i] - 1
    s = s_polynomial(F[0], r_y, DRL).mul_term(tuple(gamma))
    predicted = r_y.degree() + sum(d - 1 for d in degs[j:]) + 1
    target = sys.replace(F + [r_y], note="remainder_field_equation")
    rec = _record(s, target, "mimc_remainder", predicted, hyp, d_max or predicted + 2)
    rec.hypotheses["j"] = j
    return rec


def witness_feistel(sys: PolySystem, d_max: int | None = None) -> DegreeFallRecord:
    """x^gamma * S(t, f~_{L,1}) with t = f~_{L,n}(x_{L,n-1} -> c_R), measured in the full system."""
    spec = sys.spec
    n = spec.rounds
    if n < 3:
        raise HypothesisError("the Feistel witness needs at least three rounds")
    R = sys.ring
    H = downsized_drl_feistel(sys)
    P = H.ring
    degs = [f.degree() for f in H.polys]
    c_R = sys.provenance["ciphertext"][1]
    hyp = {"degrees_at_least_2": all(d >= 2 for d in degs)}
    t = H.polys[-1].substitute({P.index(f"xL{n - 1}"): P.const(c_R)})
    yv = P.index("y")
    hyp["d1_at_most_dn"] = degs[0] <= degs[-1]
    hyp["last_has_y_power"] = t.coeff(P.var_mono(yv, degs[-1])) != 0 and t.degree() == degs[-1]
    sb = lex_gb_feistel(sys, check=False)
    g = upoly.gcd(sb.univariate, sb.extra_univariates[0], R.q) if sb.extra_univariates else sb.univariate
    hyp["branch_gcd_degree"] = upoly.deg(g)
    hyp["gcd_below_d1"] = upoly.deg(g) < degs[0]
    if not all(v for k, v in hyp.items() if k != "branch_gcd_degree"):
        raise HypothesisError(f"hypotheses violated: {hyp}")
    gamma = [0] * P.nvars
    for i in range(2, n):
        gamma[P.index(f"xR{i}")] = degs[i - 1] - 1
    s = s_polynomial(t, H.polys[0], DRL).mul_term(tuple(gamma)).change_ring(R)
    predicted = degs[-1] + sum(d - 1 for d in degs[1:-1])
    return _record(s, sys, "feistel", predicted, hyp, d_max or predicted + 2)


def witness_hash(sys: PolySystem, d_max: int | None = None) -> DegreeFallRecord:
    """x^gamma * S(g, x2^q - x2) for the preimage system with the x2 field equation.

    ``sys`` is the linearly eliminated preimage system (variables x_{L,2..n-2}, x1, x2)
    with x2^q - x2 appended; g is the last-round polynomial, whose leading monomial is a
    power of x2, and x^gamma runs over the remaining variables."""
    R, q = sys.ring, sys.ring.q
    x2 = R.gen("x2")
    fe = x2 ** q - x2
    if not sys.polys or sys.polys[-1] != fe:
        raise HypothesisError("expected x2^q - x2 as the last polynomial")
    F = list(sys.polys[:-1])
    i2 = R.index("x2")
    g = [f for f in F if sum(f.lm()) == f.lm()[i2]]
    hyp = {"x2_power_generator": len(g) == 1}
    lms = [f.lm() for f in F]
    hyp["pure_power_leading_monomials"] = all(sum(1 for e in m if e) == 1 for m in lms) and \
        len({m.index(next(e for e in m if e)) for m in lms}) == len(lms) == R.nvars
    if not all(hyp.values()):
        raise HypothesisError(f"hypotheses violated: {hyp}")
    g = g[0]
    _, unis = substitution_solve(F, R, "x2")
    uni = unis[0]
    for u in unis[1:]:
        uni = upoly.gcd(uni, u, q)
    roots, _ = field_gcd_roots(uni, q)
    d2 = g.degree()
    if "x1" in R.variables:
        i1 = R.index("x1")
        d2 = next((f.degree() for f, m in zip(F, lms) if m[i1]), d2)
    hyp["univariate_roots"] = len(roots)
    hyp["roots_below_d2"] = len(roots) < d2
    if not hyp["roots_below_d2"]:
        raise HypothesisError(f"hypotheses violated: {hyp}")
    gamma = [0] * R.nvars
    for f, m in zip(F, lms):
        v = next(k for k, e in enumerate(m) if e)
        if v != i2:
            gamma[v] = f.degree() - 1
    s = s_polynomial(g, fe, DRL).mul_term(tuple(gamma))
    predicted = q + sum(gamma)
    return _record(s, sys, "hash", predicted, hyp, d_max or predicted + 2)


def conjecture_harness(sys: PolySystem, d_max: int | None = None) -> DegreeFallRecord:
    """(prod x_i) * S(f_1, y^q - y) against the system with every field equation.

    The record states whether this instance supports the conjectured fall; it
    proves nothing in general."""
    R, q = sys.ring, sys.ring.q
    fes = [R.gen(v) ** q - R.gen(v) for v in R.variables]
    body = [f for f in sys.polys if f not in fes]
    y = R.gen("y")
    xs = [0 if v == "y" else 1 for v in R.variables]
    s = s_polynomial(body[0], y ** q - y, DRL).mul_term(tuple(xs))
    full = sys.replace(body + fes, note="all_field_equations")
    rec = _record(s, full, "conjecture", None, {}, d_max or q + 2 * len(body) + 2)
    rec.hypotheses["verdict"] = "supports" if rec.has_fall else (
        "refutes" if rec.d_f is not None else "undecided")
    return rec


def generic_scan(f: Polynomial, sys, d_max: int = 60) -> DegreeFallRecord:
    """Record for an arbitrary ideal element (used as a negative control)."""
    return _record(f, sys, "generic_scan", None, {}, d_max)


__all__ = ["DegreeFallRecord", "membership_degree", "last_fall_degree", "witness_mimc_field_eq",
           "witness_mimc_remainder", "witness_feistel", "witness_hash", "conjecture_harness",
           "generic_scan", "NotInIdeal", "BudgetExceeded"]
