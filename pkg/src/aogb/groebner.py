"""Gröbner bases: a small Buchberger oracle, the Macaulay-matrix engine,
solving-degree scans, normal forms and staircase counting."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .macaulay import RowSpaceFiltration, build, rref, row_space_polys
from .mpoly import (DRL, Monomial, Polynomial, as_order, divide, mono_coprime, mono_divides,
                    mono_lcm, s_polynomial)


class BudgetExceeded(RuntimeError):
    """Raised when a pair, degree or time budget runs out."""


@dataclass
class GroebnerBasis:
    polys: list
    order: str = "drl"
    source: str = "buchberger_oracle"

    @property
    def ring(self):
        return self.polys[0].ring if self.polys else None

    def leading_monomials(self) -> list[Monomial]:
        return [g.lm(self.order) for g in self.polys]

    def max_degree(self) -> int:
        return max((g.degree() for g in self.polys), default=0)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "source": self.source,
            "variables": list(self.ring.variables) if self.ring else [],
            "q": self.ring.q if self.ring else None,
            "degrees": [g.degree() for g in self.polys],
            "polys": [g.to_str(self.order) for g in self.polys],
        }


def _nonzero(polys):
    return [f for f in polys if not f.is_zero()]


def _pairs_by_lcm(lms, order):
    pairs = []
    for j in range(len(lms)):
        for i in range(j):
            if mono_coprime(lms[i], lms[j]):
                continue
            lcm = mono_lcm(lms[i], lms[j])
            pairs.append((sum(lcm), order.desc_key(lcm)[::-1], i, j))
    pairs.sort()
    return pairs


def first_failing_pair(polys, order=DRL):
    """Return (i, j, remainder) for the first S-pair (by lcm degree) that does
    not reduce to zero, or None when the Buchberger criterion holds."""
    order = as_order(order)
    polys = _nonzero(polys)
    lms = [f.lm(order) for f in polys]
    for _, _, i, j in _pairs_by_lcm(lms, order):
        r = divide(s_polynomial(polys[i], polys[j], order), polys, order)[1]
        if not r.is_zero():
            return i, j, r
    return None


def is_groebner(polys, order=DRL) -> bool:
    """Buchberger criterion with the coprime leading monomial skip."""
    return first_failing_pair(polys, order) is None


def interreduce(polys, order=DRL) -> list[Polynomial]:
    """Monic reduced form of a Gröbner basis (minimalize, then tail-reduce)."""
    order = as_order(order)
    polys = [f.monic(order) for f in _nonzero(polys)]
    polys.sort(key=lambda f: order.desc_key(f.lm(order)), reverse=True)
    minimal: list[Polynomial] = []
    for f in polys:
        lm = f.lm(order)
        if any(mono_divides(g.lm(order), lm) for g in minimal):
            continue
        minimal = [g for g in minimal if not mono_divides(lm, g.lm(order))]
        minimal.append(f)
    out = []
    for i, f in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm, lc = f.leading_term(order)
        tail = f - Polynomial(f.ring, {lm: lc}, _clean=False)
        tail = divide(tail, others, order)[1] if others and not tail.is_zero() else tail
        out.append((tail + Polynomial(f.ring, {lm: 1}, _clean=False)).monic(order))
    out.sort(key=lambda f: order.desc_key(f.lm(order)))
    return out


def buchberger(polys, order=DRL, pair_budget: int = 20000, time_budget: float | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis by Buchberger's algorithm (normal selection,
    coprime and chain criteria).  Meant as a small-instance oracle."""
    order = as_order(order)
    G = [f.monic(order) for f in _nonzero(polys)]
    if not G:
        return GroebnerBasis([], order.kind, "buchberger_oracle")
    if any(f.degree() == 0 for f in G):
        return GroebnerBasis([G[0].ring.const(1)], order.kind, "buchberger_oracle")
    start = time.monotonic()
    lms = [f.lm(order) for f in G]
    pairs = {(i, j) for j in range(len(G)) for i in range(j)}
    done = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (sum(mono_lcm(lms[p[0]], lms[p[1]])),
                                         order.desc_key(mono_lcm(lms[p[0]], lms[p[1]]))[::-1], p))
        pairs.discard((i, j))
        lcm = mono_lcm(lms[i], lms[j])
        if mono_coprime(lms[i], lms[j]):
            continue
        if any(k not in (i, j) and mono_divides(lms[k], lcm)
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(G))):
            continue
        done += 1
        if done > pair_budget:
            raise BudgetExceeded(f"pair budget {pair_budget} exhausted")
        if time_budget is not None and time.monotonic() - start > time_budget:
            raise BudgetExceeded("time budget exhausted")
        r = divide(s_polynomial(G[i], G[j], order), G, order)[1]
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.degree() == 0:
            return GroebnerBasis([r], order.kind, "buchberger_oracle")
        G.append(r)
        lms.append(r.lm(order))
        k = len(G) - 1
        pairs |= {(a, k) for a in range(k)}
    return GroebnerBasis(interreduce(G, order), order.kind, "buchberger_oracle")


def normal_form(f: Polynomial, gb, order=None) -> Polynomial:
    polys = gb.polys if isinstance(gb, GroebnerBasis) else list(gb)
    if order is None:
        order = gb.order if isinstance(gb, GroebnerBasis) else DRL
    if not polys:
        return f
    return divide(f, polys, order)[1]


def same_ideal(A, B, order=DRL) -> bool:
    """Mutual reduction test; A and B must both be Gröbner bases."""
    A = A.polys if isinstance(A, GroebnerBasis) else list(A)
    B = B.polys if isinstance(B, GroebnerBasis) else list(B)
    return (all(normal_form(f, B, order).is_zero() for f in A)
            and all(normal_form(g, A, order).is_zero() for g in B))


def _candidate_check(candidate, generators, order) -> bool:
    if not candidate:
        return all(f.is_zero() for f in generators)
    for f in generators:
        if not divide(f, candidate, order)[1].is_zero():
            return False
    return is_groebner(candidate, order)


def _minimal_rows(polys, order):
    """Rows of an echelon basis whose leading monomials are minimal generators."""
    polys = sorted(_nonzero(polys), key=lambda f: (f.degree(), order.desc_key(f.lm(order))))
    keep, lms = [], []
    for f in polys:
        lm = f.lm(order)
        if any(mono_divides(m, lm) for m in lms):
            continue
        keep.append(f)
        lms.append(lm)
    return keep


def linear_algebra_gb(sys, order=DRL, d: int = 0, mode: str = "inhomogeneous"):
    """Gaussian elimination on M_{<=d} (or M_0..M_d for homogeneous input).

    Returns (GroebnerBasis or None, achieved)."""
    order = as_order(order)
    gens = _nonzero(sys.polys if hasattr(sys, "polys") else sys)
    if mode == "homogeneous":
        if not all(f.is_homogeneous() for f in gens):
            raise ValueError("homogeneous mode needs homogeneous generators")
        rows = []
        for e in range(d + 1):
            M = build(gens, order, e, "homogeneous")
            if M.data.shape[0]:
                rows += row_space_polys(rref(M))
    elif order.kind == "drl":
        W = RowSpaceFiltration(gens, order)
        W.advance_to(d)
        rows = W.minimal_rows()
    else:
        rows = row_space_polys(rref(build(gens, order, d)))
    cand = _minimal_rows(rows, order)
    if _candidate_check(cand, gens, order):
        return GroebnerBasis(interreduce(cand, order), order.kind, f"macaulay({d})"), True
    return None, False


@dataclass
class SolvingDegreeResult:
    degree: int | None
    profile: dict = field(default_factory=dict)
    exhausted: bool = False
    gb: GroebnerBasis | None = None
    ranks: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "solving_degree": self.degree,
            "exhausted": self.exhausted,
            "profile": {str(k): v for k, v in self.profile.items()},
            "ranks": {str(k): v for k, v in self.ranks.items()},
            "gb": self.gb.to_json() if self.gb else None,
            "seconds": round(self.seconds, 3),
        }


def solving_degree(sys, order=DRL, d_max: int = 40, time_budget: float | None = None,
                   keep_going: int = 0) -> SolvingDegreeResult:
    """Least d such that elimination on M_{<=d} yields a Gröbner basis.

    The scan starts at the largest input degree.  Whether a degree is achieved
    depends only on the ideal generated by the leading monomials of W_d, so the
    Buchberger check is rerun only when that monomial ideal grows.
    ``keep_going`` extra degrees are scanned after the first success to record
    the profile."""
    order = as_order(order)
    if order.kind != "drl":
        raise ValueError("solving degree scans use DRL")
    gens = _nonzero(sys.polys if hasattr(sys, "polys") else sys)
    start = time.monotonic()
    d0 = max(f.degree() for f in gens)
    if d_max < d0:
        raise ValueError("d_max below the largest input degree")
    W = RowSpaceFiltration(gens, order)
    res = SolvingDegreeResult(None)
    last_minimal, last_verdict = None, False
    stop_at = None
    for d in range(d0, d_max + 1):
        if time_budget is not None and time.monotonic() - start > time_budget:
            res.exhausted = True
            break
        W.advance_to(d)
        res.ranks[d] = W.rank
        if W.minimal == last_minimal:
            verdict = last_verdict
        else:
            rows = W.minimal_rows()
            verdict = _candidate_check(rows, gens, order)
            if verdict and res.gb is None:
                res.gb = GroebnerBasis(interreduce(rows, order), order.kind, f"macaulay({d})")
            last_minimal, last_verdict = list(W.minimal), verdict
        res.profile[d] = verdict
        if verdict and res.degree is None:
            res.degree = d
            stop_at = d + keep_going
        if stop_at is not None and d >= stop_at:
            break
    else:
        if res.degree is None:
            res.exhausted = True
    res.seconds = time.monotonic() - start
    return res


# staircases and Hilbert series of monomial ideals

def _minimalize(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def hilbert_numerator(gens, nvars: int) -> list:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^n of P/(gens),
    by recursive splitting on a variable of a non-pure-power generator."""
    gens = _minimalize([tuple(m) for m in gens])
    if not gens:
        return [1]
    if any(sum(m) == 0 for m in gens):
        return [0]
    supports = [[i for i, e in enumerate(m) if e] for m in gens]
    if all(len(s) == 1 for s in supports) or all(
        mono_coprime(a, b) for k, a in enumerate(gens) for b in gens[k + 1:]
    ):
        out = [1]
        for m in gens:
            out = _poly_mul(out, [1] + [0] * (sum(m) - 1) + [-1])
        return out
    # pivot on the variable occurring in the most mixed generators; the pivot
    # exponent stays below any pure power of that variable, so both branches shrink
    mixed = [m for m, s in zip(gens, supports) if len(s) > 1]
    counts = [sum(1 for m in mixed if m[i]) for i in range(nvars)]
    i = max(range(nvars), key=lambda k: counts[k])
    exps = sorted(m[i] for m in mixed if m[i])
    e = exps[len(exps) // 2]
    p = tuple(e if k == i else 0 for k in range(nvars))
    with_p = hilbert_numerator(gens + [p], nvars)
    colon = [tuple(max(0, a - b) for a, b in zip(m, p)) for m in gens]
    shifted = [0] * e + hilbert_numerator(colon, nvars)
    return _poly_add(with_p, shifted)


def hilbert_polynomial_part(gens, nvars: int) -> list | None:
    """Coefficients h_d = #standard monomials of degree d when the quotient is
    finite dimensional, else None."""
    num = hilbert_numerator(gens, nvars)
    h = list(num)
    for _ in range(nvars):
        # divide by (1 - t): coefficients become prefix sums; exact iff sum is zero
        if sum(h) != 0:
            return None
        acc, out = 0, []
        for c in h[:-1]:
            acc += c
            out.append(acc)
        h = out
    while h and h[-1] == 0:
        h.pop()
    return h


def has_pure_powers(lms, nvars: int, skip: tuple = ()) -> bool:
    for i in range(nvars):
        if i in skip:
            continue
        if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
            return False
    return True


def quotient_dimension(gb) -> int | float:
    """Number of standard monomials; ``math.inf`` for positive-dimensional ideals."""
    polys = gb.polys if isinstance(gb, GroebnerBasis) else list(gb)
    order = gb.order if isinstance(gb, GroebnerBasis) else "drl"
    if not polys:
        return float("inf")
    ring = polys[0].ring
    lms = [f.lm(order) for f in polys]
    if any(sum(m) == 0 for m in lms):
        return 0
    if not has_pure_powers(lms, ring.nvars):
        return float("inf")
    h = hilbert_polynomial_part(lms, ring.nvars)
    return sum(h)


def standard_monomials(gb) -> list[Monomial]:
    polys = gb.polys if isinstance(gb, GroebnerBasis) else list(gb)
    order = gb.order if isinstance(gb, GroebnerBasis) else "drl"
    ring = polys[0].ring
    lms = [f.lm(order) for f in polys]
    if any(sum(m) == 0 for m in lms):
        return []
    if not has_pure_powers(lms, ring.nvars):
        raise ValueError("infinitely many standard monomials")
    bounds = [min(m[i] for m in lms if m[i] and sum(m) == m[i]) for i in range(ring.nvars)]
    out = []

    def rec(prefix, i):
        if i == ring.nvars:
            m = tuple(prefix)
            if not any(mono_divides(g, m) for g in lms):
                out.append(m)
            return
        for e in range(bounds[i]):
            rec(prefix + [e], i + 1)

    rec([], 0)
    return out
