"""Dense linear algebra modulo a prime on numpy int64 arrays.

Entries are kept in [0, q).  Products go through float64 BLAS in chunks small
enough that every partial sum is an exact integer below 2^53.
"""

from __future__ import annotations

import numpy as np

from .gf import inverse_mod

_EXACT = float(2**53)


def _check_modulus(q: int):
    if q >= 2**31:
        raise ValueError("dense GF(p) kernels support q < 2^31 only")


def matmul_mod(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    """(A @ B) mod q for int64 inputs reduced mod q."""
    _check_modulus(q)
    n = A.shape[1]
    if A.shape[0] == 0 or B.shape[1] == 0 or n == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, int(_EXACT // float((q - 1) ** 2 + 1)) - 1)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, n, step):
        a = A[:, s:s + step].astype(np.float64)
        b = B[s:s + step].astype(np.float64)
        out += np.fmod(a @ b, q).astype(np.int64)
        out %= q
    return out


def rref_mod(A: np.ndarray, q: int, copy: bool = True) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q.

    Pivots are chosen column by column from the left; within a column the
    first remaining row with a nonzero entry is used.  Zero rows are dropped.
    Returns (matrix, pivot columns)."""
    _check_modulus(q)
    M = np.array(A, dtype=np.int64, copy=copy) % q
    nrows, ncols = M.shape
    pivots: list[int] = []
    top = 0
    since_compact = 0
    for c in range(ncols):
        if top >= nrows:
            break
        col = M[top:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        r = top + int(nz[0])
        if r != top:
            M[[top, r]] = M[[r, top]]
        inv = inverse_mod(int(M[top, c]), q)
        if inv != 1:
            M[top, c:] = M[top, c:] * inv % q
        prow = M[top, c:]
        idx = np.flatnonzero(M[:, c])
        idx = idx[idx != top]
        if idx.size:
            M[idx, c:] = (M[idx, c:] - np.outer(M[idx, c], prow)) % q
        pivots.append(c)
        top += 1
        since_compact += 1
        if since_compact >= 64 and nrows - top > 64:
            since_compact = 0
            alive = M[top:, c + 1:].any(axis=1)
            if not alive.all():
                M = np.concatenate([M[:top], M[top:][alive]], axis=0)
                nrows = M.shape[0]
    return M[:top].copy(), pivots


def rank_mod(A: np.ndarray, q: int) -> int:
    return len(rref_mod(A, q)[1])


def gauss_reference(A, q: int) -> tuple[list[list[int]], list[int]]:
    """Plain-Python Gauss-Jordan used as an independent oracle in tests."""
    M = [[int(x) % q for x in row] for row in A]
    piv: list[int] = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(M)) if M[i][c]), None)
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        inv = inverse_mod(M[r][c], q)
        M[r] = [x * inv % q for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % q for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M[:r], piv


def mat_inv_mod(A, q: int) -> list[list[int]]:
    """Inverse of a square matrix over F_q (plain Python, small sizes)."""
    n = len(A)
    aug = [[int(x) % q for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, piv = gauss_reference(aug, q)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular over F_q")
    return [row[n:] for row in R[:n]]


def mat_vec_mod(A, v, q: int) -> list[int]:
    return [sum(int(a) * int(x) for a, x in zip(row, v)) % q for row in A]


def mat_mul_small(A, B, q: int) -> list[list[int]]:
    return [[sum(int(A[i][k]) * int(B[k][j]) for k in range(len(B))) % q for j in range(len(B[0]))]
            for i in range(len(A))]
