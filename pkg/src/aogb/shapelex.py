"""LEX shape bases of iterated systems, root extraction and key recovery."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import upoly
from .groebner import is_groebner, same_ideal
from .mpoly import DRL, LEX, Polynomial, Ring
from .systems import PolySystem, eliminate_linear


class HypothesisError(ValueError):
    """A structural precondition of a construction does not hold."""


@dataclass
class ShapeBasis:
    ring: Ring
    base: str
    linear_part: list  # (variable, coefficient list of g_i(base))
    univariate: list
    extra_univariates: list = field(default_factory=list)
    order: str = "lex"

    def degrees(self) -> list[int]:
        return [upoly.deg(g) for _, g in self.linear_part] + [upoly.deg(self.univariate)]

    def univariate_poly(self, coeffs=None) -> Polynomial:
        coeffs = self.univariate if coeffs is None else coeffs
        b = self.ring.index(self.base)
        return Polynomial(self.ring, {self.ring.var_mono(b, e): c for e, c in enumerate(coeffs) if c})

    def polys(self) -> list[Polynomial]:
        out = [self.ring.gen(v) - self.univariate_poly(g) for v, g in self.linear_part]
        return out + [self.univariate_poly()]

    def to_json(self) -> dict:
        return {"base": self.base, "variables": list(self.ring.variables),
                "degrees": self.degrees(),
                "polys": [f.to_str(LEX) for f in self.polys()]}


def _eval_univariate(f: Polynomial, known: dict, base: int, q: int, budget: int):
    """f with known variables (index -> coefficient list) substituted, as a polynomial in base."""
    acc: list[int] = []
    cache: dict = {}
    for m, c in f.terms.items():
        t = [c]
        for i, e in enumerate(m):
            if e == 0:
                continue
            if i == base:
                g = [0] * e + [1]
            else:
                key = (i, e)
                if key not in cache:
                    cache[key] = upoly.power(known[i], e, q)
                g = cache[key]
            t = upoly.mul(t, g, q)
            if len(t) - 1 > budget:
                raise RuntimeError(f"univariate degree exceeds budget {budget}")
        acc = upoly.add(acc, t, q)
    return acc


def _linear_in(f: Polynomial, v: int):
    """Constant coefficient a with f = a*v + (terms free of v), or None."""
    a = None
    for m, c in f.terms.items():
        if m[v] == 0:
            continue
        if m[v] != 1 or sum(m) != 1:
            return None
        a = c
    return a


def substitution_solve(polys, ring: Ring, base: str, degree_budget: int = 10 ** 5):
    """Express every variable as a polynomial in ``base`` by repeatedly using a
    polynomial that is affine in its single unknown variable.

    Returns (solved: list of (var, coeffs) in solving order, univariates: list of
    coefficient lists from polynomials with no unknown left)."""
    q = ring.q
    b = ring.index(base)
    known: dict = {}
    order_solved = []
    univariates = []
    pending = list(polys)
    while pending:
        progress = False
        for k, f in enumerate(pending):
            unknown = [i for i in f.variables_used() if i != b and i not in known]
            if len(unknown) == 0:
                univariates.append(upoly.monic(_eval_univariate(f, known, b, q, degree_budget), q)
                                   or _eval_univariate(f, known, b, q, degree_budget))
            elif len(unknown) == 1 and _linear_in(f, unknown[0]) is not None:
                v = unknown[0]
                a = _linear_in(f, v)
                rest = f - ring.gen(v).scale(a)
                val = upoly.scale(_eval_univariate(rest, known, b, q, degree_budget), (-pow(a, q - 2, q)) % q, q)
                known[v] = val
                order_solved.append((ring.variables[v], val))
            else:
                continue
            pending.pop(k)
            progress = True
            break
        if not progress:
            raise HypothesisError("substitution stalls: no polynomial is affine in a single unknown")
    missing = [v for i, v in enumerate(ring.variables) if i != b and i not in known]
    if missing:
        raise HypothesisError(f"variables not determined by the system: {missing}")
    return order_solved, univariates


def _combine(univariates, q):
    g = []
    for u in univariates:
        g = upoly.gcd(g, u, q) if g else upoly.monic(u, q)
    return g


def _shape(sys: PolySystem, base: str, polys, degree_budget, check: bool) -> ShapeBasis:
    solved, unis = substitution_solve(polys, sys.ring, base, degree_budget)
    if not unis:
        raise HypothesisError("no univariate polynomial produced")
    main = unis[0]
    pos = {v: i for i, v in enumerate(sys.ring.variables)}
    linear = sorted(solved, key=lambda t: pos[t[0]])
    sb = ShapeBasis(sys.ring, base, linear, main, unis[1:])
    if check and sb.univariate and upoly.deg(sb.univariate) > 0:
        if not is_groebner(sb.polys(), LEX):
            raise AssertionError("constructed shape basis is not a LEX Groebner basis")
    return sb


def lex_gb_iterated(sys: PolySystem, degree_budget: int = 10 ** 5, check: bool = True) -> ShapeBasis:
    """LEX basis x_i - g_i(y), f_n(y) of a univariate keyed iterated system."""
    if "y" not in sys.ring.variables:
        raise HypothesisError("iterated systems need a key variable y")
    sb = _shape(sys, "y", sys.polys, degree_budget, check)
    if any(upoly.deg(g) < 1 for _, g in sb.linear_part):
        raise HypothesisError("degenerate round: a state variable is constant")
    return sb


def lex_gb_feistel(sys: PolySystem, degree_budget: int = 10 ** 5, check: bool = True) -> ShapeBasis:
    """LEX shape basis of the downsized system H (variables x_{R,2..n-1}, x_{L,n-1}, y).

    The univariate obtained from f_{R,n} is kept in ``extra_univariates``."""
    H = downsized_drl_feistel(sys, with_last_right=True)
    sb = _shape(H.replace(H.polys[:-1]), "y", H.polys[:-1], degree_budget, check)
    _, unis = substitution_solve(H.polys, H.ring, "y", degree_budget)
    sb.extra_univariates = unis[1:]
    return sb


def _check_feistel_monomials(sys: PolySystem):
    R = sys.ring
    n = sys.spec.rounds
    d = sys.spec.exponent
    if d < 2:
        raise HypothesisError("Feistel round degrees must be at least 2")
    for i in range(2, n + 1):
        f = sys.polys[2 * (i - 1)]
        v = R.index(f"xL{i - 1}")
        if f.coeff(R.var_mono(v, d)) == 0:
            raise HypothesisError(f"f_L{i} lacks the monomial xL{i - 1}^{d}")


def downsized_drl_feistel(sys: PolySystem, with_last_right: bool = False) -> PolySystem:
    """The nonlinear part of the DRL basis of F minus f_{R,n} in the surviving variables.

    Linear polynomials x_{R,1} = p_L and x_{R,i} = x_{L,i-1} are substituted into the
    nonlinear ones (the surviving names are x_{R,2..n-1}, x_{L,n-1}, y)."""
    if sys.spec is None or sys.spec.family != "feistel_mimc":
        raise HypothesisError("downsizing needs a Feistel-MiMC system")
    _check_feistel_monomials(sys)
    n = sys.spec.rounds
    R = sys.ring
    if n < 3:
        keep = [f"xL{n - 1}", "y"]
    else:
        keep = [f"xR{i}" for i in range(2, n)] + [f"xL{n - 1}", "y"]
    P = Ring.make(keep, R.q)
    p_L = sys.provenance["plaintext"][0]
    sub = {R.index("xR1"): R.const(p_L)} if n >= 2 else {}
    for i in range(1, n - 1):
        # x_{L,i} = x_{R,i+1}
        sub[R.index(f"xL{i}")] = R.gen(f"xR{i + 1}")
    for i in range(2, n):
        sub.setdefault(R.index(f"xR{i}"), R.gen(f"xR{i}"))
    out = []
    for i in range(n):
        f = sys.polys[2 * i]
        out.append(f.substitute(sub).change_ring(P))
    if with_last_right:
        out.append(sys.polys[-1].substitute(sub).change_ring(P))
    roles = {v: sys.roles.get(v, "state") for v in keep}
    res = sys.replace(out, ring=P, roles=roles, note="downsized_drl_feistel", blocks=None)
    return res


def iterated_from_lex(shape: ShapeBasis) -> PolySystem:
    """Univariate keyed iterated generators of the ideal of a shape basis."""
    R, q = shape.ring, shape.ring.q
    gs = [g for _, g in shape.linear_part] + [shape.univariate]
    degs = [upoly.deg(g) for g in gs]
    if degs and degs[0] < 1:
        raise HypothesisError("the first shape polynomial must have degree at least 1")
    if any(a > b for a, b in zip(degs, degs[1:])):
        raise HypothesisError("shape degrees must be weakly increasing")
    uni = shape.univariate_poly
    out = []
    names = [v for v, _ in shape.linear_part]
    for i, g in enumerate(gs):
        if i == 0:
            f = uni(g)
        else:
            # expand g in base g_{i-1}(y): g = sum c_j(y) g_{i-1}^j -> sum c_j(y) x_{i-1}^j
            prev = R.gen(names[i - 1])
            f = R.zero()
            rest, j = list(g), 0
            base = gs[i - 1]
            while rest:
                rest, c = upoly.divmod_(rest, base, q)
                f = f + uni(c) * prev ** j
                j += 1
        if i < len(names):
            f = f - R.gen(names[i])
        out.append(f)
    roles = {v: "state" for v in R.variables}
    roles[shape.base] = "key"
    return PolySystem(R, out, roles, {"builder": "iterated_from_lex"})


def field_gcd_roots(f, q: int) -> tuple[list[int], int]:
    """F_q-roots of a univariate polynomial (coefficient list) via gcd with y^q - y.

    Returns (sorted roots, degree of the gcd)."""
    f = upoly.trim([c % q for c in f])
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    if len(f) == 1:
        return [], 0
    yq = upoly.powmod([0, 1], q, f, q)
    g = upoly.gcd(f, upoly.sub(yq, [0, 1], q), q)
    dg = upoly.deg(g)
    if dg <= 0:
        return [], 0
    roots = [a for a in range(q) if upoly.evaluate(g, a, q) == 0]
    return roots, dg


@dataclass
class AttackResult:
    attack: str
    spec_digest: str
    keys: list
    univariate_degrees: list
    seconds: float

    def to_json(self) -> dict:
        return {"attack": self.attack, "spec_digest": self.spec_digest, "recovered_keys": self.keys,
                "univariate_degrees": self.univariate_degrees, "seconds": round(self.seconds, 6)}


def recover_key(sys: PolySystem, attack: str | None = None) -> AttackResult:
    """Key (or preimage) candidates in F_q for the supported attack models."""
    t0 = time.perf_counter()
    q = sys.ring.q
    builder = sys.provenance.get("builder")
    attack = attack or {"mimc": "field_eq", "two_plaintext": "two_plaintext",
                        "feistel": "feistel", "feistel_hash": "hash"}.get(builder)
    digest = sys.provenance.get("spec_digest", "")
    if attack == "field_eq":
        sb = lex_gb_iterated(sys, check=False)
        keys, _ = field_gcd_roots(sb.univariate, q)
        degs = [upoly.deg(sb.univariate)]
    elif attack in ("two_plaintext", "feistel"):
        _, unis = substitution_solve(sys.polys, sys.ring, "y")
        g = _combine(unis, q)
        degs = [upoly.deg(u) for u in unis]
        keys, _ = field_gcd_roots(g, q) if g else (list(range(q)), q)
    elif attack == "hash":
        solved, unis = substitution_solve(sys.polys, sys.ring, "x2")
        g = _combine(unis, q)
        degs = [upoly.deg(u) for u in unis]
        roots, _ = field_gcd_roots(g, q) if g else (list(range(q)), q)
        solved = dict(solved)
        if "x1" in solved:
            x1 = solved["x1"]
            keys = sorted({upoly.evaluate(x1, r, q) for r in roots})
        else:
            # x1 was eliminated linearly; evaluate its expression at each recovered point
            R = sys.ring
            e = R.parse(sys.provenance["eliminated_exprs"]["x1"])
            keys = sorted({e.evaluate({v: (r if v == "x2" else upoly.evaluate(solved[v], r, q))
                                       for v in R.variables}) for r in roots})
    else:
        raise ValueError(f"unknown attack {attack!r}")
    return AttackResult(attack, digest, keys, degs, time.perf_counter() - t0)


def hash_univariate_degree(sys: PolySystem) -> int:
    return upoly.deg(_combine(substitution_solve(sys.polys, sys.ring, "x2")[1], sys.ring.q))


def verify_ideal_equality(a, b, order=DRL) -> bool:
    return same_ideal(list(a), list(b), order)


__all__ = ["ShapeBasis", "HypothesisError", "lex_gb_iterated", "lex_gb_feistel", "downsized_drl_feistel",
           "iterated_from_lex", "field_gcd_roots", "recover_key", "substitution_solve", "eliminate_linear"]
