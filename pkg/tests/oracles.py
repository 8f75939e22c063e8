"""Independent reference implementations used by the tests (sympy and brute force)."""

from __future__ import annotations

import itertools

import sympy

from aogb.mpoly import Polynomial, Ring


def to_sympy(f: Polynomial):
    syms = sympy.symbols(f.ring.variables)
    return sympy.Poly(f.to_str().replace("^", "**") if not f.is_zero() else "0", *syms, modulus=f.ring.q)


def from_sympy(P, ring: Ring) -> Polynomial:
    return Polynomial(ring, {tuple(m): int(c) for m, c in P.terms()})


def sympy_groebner(polys, ring: Ring, order: str = "grevlex") -> list[Polynomial]:
    syms = sympy.symbols(ring.variables)
    exprs = [to_sympy(f).as_expr() for f in polys]
    G = sympy.groebner(exprs, *syms, modulus=ring.q, order=order)
    return [from_sympy(sympy.Poly(g, *syms, modulus=ring.q), ring).monic(order="drl" if order == "grevlex" else "lex")
            for g in G.exprs]


def brute_force_zeros(polys, ring: Ring) -> set:
    """All F_q points where every polynomial vanishes (small rings only)."""
    q, n = ring.q, ring.nvars
    return {pt for pt in itertools.product(range(q), repeat=n) if all(f.evaluate(pt) == 0 for f in polys)}


def rank_mod_reference(rows, q: int) -> int:
    """Schoolbook Gauss-Jordan rank over F_q on Python lists."""
    A = [list(map(lambda v: v % q, r)) for r in rows]
    rank, cols = 0, len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], q - 2, q)
        A[rank] = [v * inv % q for v in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % q for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank
