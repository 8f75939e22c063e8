"""Prime field arithmetic.

Polynomials elsewhere in the package keep raw ``int`` coefficients reduced
modulo ``q`` for speed; :class:`FieldElement` is the checked scalar type used
at API boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the witness set is exact below 3.3e24 and
    the first 20 primes make false positives astronomically unlikely beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def inverse_mod(a: int, q: int) -> int:
    """Inverse of a modulo q by the extended Euclidean algorithm."""
    a %= q
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    r0, r1, s0, s1 = q, a, 0, 1
    while r1:
        t = r0 // r1
        r0, r1 = r1, r0 - t * r1
        s0, s1 = s1, s0 - t * s1
    if r0 != 1:
        raise ZeroDivisionError(f"{a} is not invertible modulo {q}")
    return s0 % q


def is_permutation_exponent(d: int, q: int) -> bool:
    """x -> x^d permutes F_q iff gcd(d, q - 1) = 1."""
    if d < 2:
        raise ValueError("exponent must be at least 2")
    return math.gcd(d, q - 1) == 1


@dataclass(frozen=True)
class PrimeField:
    modulus: int

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise ValueError(f"{self.modulus} is not prime")

    @property
    def q(self) -> int:
        return self.modulus

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.modulus, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.modulus)]

    def symmetric(self, value: int) -> int:
        """Representative of value in (-q/2, q/2]."""
        v = value % self.modulus
        return v - self.modulus if v > self.modulus // 2 else v


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.modulus:
            raise ValueError("non-canonical representative")

    def _other(self, b) -> int:
        if isinstance(b, FieldElement):
            if b.field != self.field:
                raise ValueError("elements belong to different fields")
            return b.value
        if isinstance(b, int):
            return b
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(v % self.field.modulus, self.field)

    def __add__(self, b):
        return self._wrap(self.value + self._other(b))

    __radd__ = __add__

    def __sub__(self, b):
        return self._wrap(self.value - self._other(b))

    def __rsub__(self, b):
        return self._wrap(self._other(b) - self.value)

    def __mul__(self, b):
        return self._wrap(self.value * self._other(b))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return self._wrap(self.value * inverse_mod(self._other(b), self.field.modulus))

    def __rtruediv__(self, b):
        return self._wrap(self._other(b) * inverse_mod(self.value, self.field.modulus))

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self._wrap(pow(inverse_mod(self.value, self.field.modulus), -e, self.field.modulus))
        return self._wrap(pow(self.value, e, self.field.modulus))

    def inverse(self) -> "FieldElement":
        return self._wrap(inverse_mod(self.value, self.field.modulus))

    def __eq__(self, b):
        if isinstance(b, FieldElement):
            return self.field == b.field and self.value == b.value
        if isinstance(b, int):
            return self.value == b % self.field.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.modulus})"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise ValueError("elements belong to different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
