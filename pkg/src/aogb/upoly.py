"""Dense univariate polynomials over F_q as coefficient lists (constant term first)."""

from __future__ import annotations


def trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: list[int]) -> int:
    return len(trim(a)) - 1


def add(a, b, q):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n)])


def sub(a, b, q):
    return add(a, [(-x) % q for x in b], q)


def scale(a, c, q):
    return trim([(x * c) % q for x in a])


def mul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([v % q for v in out])


def divmod_(a, b, q):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = pow(b[-1], q - 2, q)
    r = list(a)
    db = len(b) - 1
    quo = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = (r[k] * inv) % q
        if c:
            quo[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % q
    return trim(quo), trim(r[:db] if db > 0 else [])


def mod(a, b, q):
    return divmod_(a, b, q)[1]


def monic(a, q):
    a = trim(a)
    return scale(a, pow(a[-1], q - 2, q), q) if a else a


def gcd(a, b, q):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(a, b, q)
    return monic(a, q)


def powmod(base, e, m, q):
    result, b = [1], mod(base, m, q)
    while e:
        if e & 1:
            result = mod(mul(result, b, q), m, q)
        b = mod(mul(b, b, q), m, q)
        e >>= 1
    return result


def evaluate(a, x, q):
    v = 0
    for c in reversed(a):
        v = (v * x + c) % q
    return v


def power(a, e, q):
    out = [1]
    for _ in range(e):
        out = mul(out, a, q)
    return out
