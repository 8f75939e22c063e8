"""Macaulay matrices and their row spaces W_d = span{s*f_i : deg(s*f_i) <= d}."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .linalg import matmul_mod, rref_mod
from .mpoly import DRL, Monomial, Polynomial, Ring, as_order, mono_divides, mono_mul, monomials_of_degree


def _polys_of(sys) -> list[Polynomial]:
    return list(sys.polys) if hasattr(sys, "polys") else list(sys)


@dataclass
class MacaulayMatrix:
    ring: Ring
    degree_bound: int
    homogeneous: bool
    order: str
    columns: list
    rows: list          # (multiplier, generator index); None for eliminated rows
    data: np.ndarray
    is_rref: bool = False
    pivots: list = field(default_factory=list)

    @property
    def shape(self):
        return self.data.shape

    def column_index(self) -> dict:
        return {m: j for j, m in enumerate(self.columns)}

    def dump(self) -> str:
        """Header, row labels and (row, col, value) triples."""
        lines = [f"d={self.degree_bound} mode={'homogeneous' if self.homogeneous else 'inhomogeneous'} "
                 f"dims={self.data.shape[0]}x{self.data.shape[1]}"]
        for i, lab in enumerate(self.rows):
            if lab is None:
                lines.append(f"row {i}: rref")
            else:
                lines.append(f"row {i}: {self.ring.mono_str(lab[0])} * f{lab[1]}")
        for i, j in zip(*np.nonzero(self.data)):
            lines.append(f"{i} {j} {int(self.data[i, j])}")
        return "\n".join(lines)


def monomials_upto(nvars: int, d: int, order=DRL) -> list[Monomial]:
    order = as_order(order)
    monos = [m for e in range(d + 1) for m in monomials_of_degree(nvars, e)]
    return order.sort_desc(monos)


def build(sys, order=DRL, d: int = 0, mode: str = "inhomogeneous") -> MacaulayMatrix:
    """M_{<=d} (inhomogeneous) or M_d (homogeneous)."""
    order = as_order(order)
    polys = _polys_of(sys)
    if not polys:
        raise ValueError("empty system")
    ring = polys[0].ring
    homogeneous = mode == "homogeneous"
    if mode not in ("homogeneous", "inhomogeneous"):
        raise ValueError(f"unknown mode {mode!r}")
    if homogeneous and not all(f.is_homogeneous() for f in polys):
        raise ValueError("homogeneous mode needs homogeneous generators")
    n = ring.nvars
    if homogeneous:
        columns = order.sort_desc(monomials_of_degree(n, d))
    else:
        columns = monomials_upto(n, d, order)
    col = {m: j for j, m in enumerate(columns)}
    labels = []
    for i, f in enumerate(polys):
        if f.is_zero():
            continue
        df = f.degree()
        if df > d:
            continue
        if homogeneous:
            mults = monomials_of_degree(n, d - df)
        else:
            mults = [m for e in range(d - df + 1) for m in monomials_of_degree(n, e)]
        for s in order.sort_desc(mults):
            labels.append((s, i))
    data = np.zeros((len(labels), len(columns)), dtype=np.int64)
    for r, (s, i) in enumerate(labels):
        for m, c in polys[i].terms.items():
            data[r, col[mono_mul(m, s)]] = c
    return MacaulayMatrix(ring, d, homogeneous, order.kind, columns, labels, data)


def rref(M: MacaulayMatrix) -> MacaulayMatrix:
    R, piv = rref_mod(M.data, M.ring.q)
    return MacaulayMatrix(M.ring, M.degree_bound, M.homogeneous, M.order, M.columns,
                          [None] * R.shape[0], R, True, piv)


def row_space_polys(M: MacaulayMatrix) -> list[Polynomial]:
    if not M.is_rref:
        raise ValueError("matrix is not in reduced row echelon form")
    out = []
    for row in M.data:
        nz = np.flatnonzero(row)
        out.append(Polynomial(M.ring, {M.columns[j]: int(row[j]) for j in nz}, _clean=False))
    return out


class RowSpaceFiltration:
    """Incremental reduced echelon basis of W_d for d = 0, 1, 2, ...

    Because DRL is degree compatible, going from d-1 to d only prepends the
    degree-d monomials as new leftmost columns and appends the rows s*f_i of
    degree exactly d.  The reduced echelon form is stored as pivot monomials
    plus a matrix R over the non-pivot ("free") monomials:

        row_j = piv_j + sum_k R[j, k] * free_k

    Since the reduced echelon form of a matrix is unique, this yields exactly
    the rref of M_{<=d} that a one-shot elimination would produce.
    """

    def __init__(self, sys, order=DRL, chunk_rows: int = 3000):
        order = as_order(order)
        if order.kind != "drl":
            raise ValueError("incremental filtration needs a degree compatible order")
        self.order = order
        self.polys = [f for f in _polys_of(sys) if not f.is_zero()]
        if not self.polys:
            raise ValueError("empty system")
        self.ring = self.polys[0].ring
        self.q = self.ring.q
        self.n = self.ring.nvars
        self.chunk_rows = chunk_rows
        self.d = -1
        self.piv: list[Monomial] = []
        self.free: list[Monomial] = []
        self.R = np.zeros((0, 0), dtype=np.int64)
        self._reindex()
        self.rank_history: dict[int, int] = {}
        self.low_history: dict[int, int] = {}
        self.minimal: list[Monomial] = []
        self._minimal_rows = None

    def _reindex(self):
        self.piv_index = {m: j for j, m in enumerate(self.piv)}
        self.free_index = {m: k for k, m in enumerate(self.free)}

    @property
    def rank(self) -> int:
        return len(self.piv)

    def advance_to(self, d: int):
        while self.d < d:
            self._advance()

    def _advance(self):
        d = self.d + 1
        new_cols = self.order.sort_desc(monomials_of_degree(self.n, d))
        self.free = new_cols + self.free
        self.R = np.hstack([np.zeros((self.R.shape[0], len(new_cols)), dtype=np.int64), self.R])
        self._reindex()
        self.d = d
        rows = []
        for f in self.polys:
            df = f.degree()
            if df > d:
                continue
            for s in self.order.sort_desc(monomials_of_degree(self.n, d - df)):
                rows.append((s, f))
        for start in range(0, len(rows), self.chunk_rows):
            self._add_rows(rows[start:start + self.chunk_rows])
        self.rank_history[d] = self.rank
        self.low_history[d] = sum(1 for m in self.piv if sum(m) <= d - 1)
        self._update_minimal()

    def _add_rows(self, rows):
        q = self.q
        nf, npv = len(self.free), len(self.piv)
        Bf = np.zeros((len(rows), nf), dtype=np.int64)
        pr, pc, pv = [], [], []
        for r, (s, f) in enumerate(rows):
            for m, c in f.terms.items():
                mm = mono_mul(m, s)
                k = self.free_index.get(mm)
                if k is not None:
                    Bf[r, k] = c
                else:
                    pr.append(r)
                    pc.append(self.piv_index[mm])
                    pv.append(c)
        if pr and npv:
            Bp = sp.csr_matrix((np.array(pv, dtype=np.int64), (pr, pc)), shape=(len(rows), npv))
            # entries of Bp are < q and each row has few terms, so int64 cannot overflow here
            Bf = (Bf - np.asarray(Bp @ self.R) % q) % q
        N, newp = rref_mod(Bf, q, copy=False)
        if not newp:
            return
        if self.R.shape[0]:
            self.R = (self.R - matmul_mod(self.R[:, newp], N, q)) % q
        keep = np.ones(nf, dtype=bool)
        keep[newp] = False
        new_piv = [self.free[k] for k in newp]
        self.R = np.vstack([self.R[:, keep], N[:, keep]])
        self.piv = self.piv + new_piv
        self.free = [m for m, kp in zip(self.free, keep) if kp]
        self._reindex()

    def _update_minimal(self):
        known = set(self.minimal)
        fresh = [m for m in self.piv if m not in known]
        fresh.sort(key=lambda m: (sum(m), self.order.desc_key(m)))
        minimal = list(self.minimal)
        for m in fresh:
            if any(mono_divides(g, m) for g in minimal):
                continue
            minimal = [g for g in minimal if not mono_divides(m, g)]
            minimal.append(m)
        self.minimal = self.order.sort_desc(minimal)

    # queries
    def row_poly(self, j: int) -> Polynomial:
        terms = {self.piv[j]: 1}
        row = self.R[j]
        for k in np.flatnonzero(row):
            terms[self.free[k]] = int(row[k])
        return Polynomial(self.ring, terms, _clean=False)

    def basis(self) -> list[Polynomial]:
        """Reduced echelon basis of W_d, sorted by descending leading monomial."""
        order = sorted(range(self.rank), key=lambda j: self.order.desc_key(self.piv[j]))
        return [self.row_poly(j) for j in order]

    def minimal_rows(self) -> list[Polynomial]:
        """Rows whose leading monomials minimally generate the leading ideal of W_d."""
        return [self.row_poly(self.piv_index[m]) for m in self.minimal]

    def low_degree_count(self, e: int) -> int:
        """dim(W_d ∩ P_{<=e})."""
        return sum(1 for m in self.piv if sum(m) <= e)

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        if f.degree() > self.d:
            return False
        vf = np.zeros(len(self.free), dtype=np.int64)
        pidx, pval = [], []
        for m, c in f.terms.items():
            k = self.free_index.get(m)
            if k is not None:
                vf[k] = c
            else:
                pidx.append(self.piv_index[m])
                pval.append(c)
        if pidx:
            vf = (vf - np.array(pval, dtype=np.int64) @ self.R[pidx]) % self.q
        return not vf.any()

    def leading_monomials(self) -> list[Monomial]:
        return list(self.piv)
