"""Multivariate polynomials over prime fields.

Monomials are plain exponent tuples (one entry per ring variable, index 0 is
the greatest variable).  Polynomials map monomials to nonzero ``int``
coefficients in ``[0, q)``.
"""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .gf import FieldElement, PrimeField, inverse_mod

Monomial = tuple


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def monomials_of_degree(nvars: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree d (stars and bars)."""
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for bars in itertools.combinations(range(d + nvars - 1), nvars - 1):
        prev, e = -1, []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(d + nvars - 2 - prev)
        out.append(tuple(e))
    return out


@dataclass(frozen=True)
class TermOrder:
    kind: str = "drl"

    def __post_init__(self):
        if self.kind not in ("drl", "lex"):
            raise ValueError(f"unknown term order {self.kind!r}")

    def desc_key(self, m: Monomial):
        """Sort key under which ascending order means descending monomials."""
        if self.kind == "drl":
            return (-sum(m),) + m[::-1]
        return tuple(-e for e in m)

    def compare(self, a: Monomial, b: Monomial) -> int:
        if len(a) != len(b):
            raise ValueError("monomials from different rings")
        ka, kb = self.desc_key(a), self.desc_key(b)
        return 0 if ka == kb else (1 if ka < kb else -1)

    def sort_desc(self, monos: Iterable[Monomial]) -> list[Monomial]:
        return sorted(monos, key=self.desc_key)

    def max(self, monos: Iterable[Monomial]) -> Monomial:
        return min(monos, key=self.desc_key)


DRL = TermOrder("drl")
LEX = TermOrder("lex")


def as_order(order) -> TermOrder:
    if isinstance(order, TermOrder):
        return order
    return TermOrder(str(order).lower())


@dataclass(frozen=True)
class Ring:
    variables: tuple
    field: PrimeField
    homogenization_slot: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if self.homogenization_slot is not None and (
            not self.variables or self.variables[-1] != self.homogenization_slot
        ):
            raise ValueError("the homogenizing variable must be the least variable")

    @classmethod
    def make(cls, variables: Sequence[str], q: int, homogenization_slot: str | None = None) -> "Ring":
        return cls(tuple(variables), PrimeField(q), homogenization_slot)

    @property
    def q(self) -> int:
        return self.field.modulus

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def one_mono(self) -> Monomial:
        return (0,) * self.nvars

    def var_mono(self, i: int, e: int = 1) -> Monomial:
        m = [0] * self.nvars
        m[i] = e
        return tuple(m)

    def gen(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return Polynomial(self, {self.var_mono(i): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def const(self, c) -> "Polynomial":
        c = int(c) % self.q
        return Polynomial(self, {self.one_mono(): c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def with_homogenizer(self, name: str = "x0") -> "Ring":
        if self.homogenization_slot is not None:
            return self
        return Ring(self.variables + (name,), self.field, name)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def mono_str(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.variables, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class Polynomial:
    """Immutable sparse polynomial; ``terms`` must not be mutated."""

    __slots__ = ("ring", "terms", "_sorted")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, int] | None = None, _clean: bool = True):
        self.ring = ring
        if terms is None:
            terms = {}
        if _clean:
            q = ring.q
            t = {}
            for m, c in terms.items():
                c = int(c) % q
                if c:
                    t[tuple(m)] = c
            terms = t
        self.terms = terms
        self._sorted = {}

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def variables_used(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def sorted_terms(self, order=DRL) -> list[tuple[Monomial, int]]:
        order = as_order(order)
        s = self._sorted.get(order.kind)
        if s is None:
            s = sorted(self.terms.items(), key=lambda t: order.desc_key(t[0]))
            self._sorted[order.kind] = s
        return s

    def leading_term(self, order=DRL) -> tuple[Monomial, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms(order)[0]

    def lm(self, order=DRL) -> Monomial:
        return self.leading_term(order)[0]

    def lc(self, order=DRL) -> int:
        return self.leading_term(order)[1]

    def monic(self, order=DRL) -> "Polynomial":
        if not self.terms:
            return self
        inv = inverse_mod(self.lc(order), self.ring.q)
        return self.scale(inv)

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    # arithmetic
    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise ValueError("polynomials from different rings")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring.const(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        q = self.ring.q
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = (t.get(m, 0) + c) % q
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial(self.ring, t, _clean=False)

    __radd__ = __add__

    def __neg__(self):
        q = self.ring.q
        return Polynomial(self.ring, {m: q - c for m, c in self.terms.items()}, _clean=False)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        q = self.ring.q
        c = int(c) % q
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c % q for m, v in self.terms.items()}, _clean=False)

    def mul_term(self, mono: Monomial, c: int = 1) -> "Polynomial":
        q = self.ring.q
        c %= q
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring, {mono_mul(m, mono): v * c % q for m, v in self.terms.items()}, _clean=False
        )

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(int(other))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        q = self.ring.q
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                t[m] = (t.get(m, 0) + c1 * c2) % q
        return Polynomial(self.ring, {m: c for m, c in t.items() if c}, _clean=False)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result, base = self.ring.const(1), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.variables, frozenset(self.terms.items())))

    # structure
    def top_component(self) -> "Polynomial":
        if not self.terms:
            raise ValueError("zero polynomial has no top component")
        d = self.degree()
        return Polynomial(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d}, _clean=False)

    def homogenize(self) -> "Polynomial":
        slot = self.ring.homogenization_slot
        if slot is None:
            raise ValueError("ring has no homogenization slot")
        h = self.ring.index(slot)
        if any(m[h] for m in self.terms):
            raise ValueError("input already involves the homogenizing variable")
        d = self.degree()
        t = {}
        for m, c in self.terms.items():
            mm = list(m)
            mm[h] = d - sum(m)
            t[tuple(mm)] = c
        return Polynomial(self.ring, t, _clean=False)

    def dehomogenize(self) -> "Polynomial":
        slot = self.ring.homogenization_slot
        if slot is None:
            raise ValueError("ring has no homogenization slot")
        return self.substitute({self.ring.index(slot): self.ring.const(1)})

    def evaluate(self, point) -> int:
        """Evaluate at a point given as a sequence (ring order) or a name -> value map."""
        q = self.ring.q
        if isinstance(point, Mapping):
            point = [int(point[v]) for v in self.ring.variables]
        point = [int(v) % q for v in point]
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(x, e, q) % q
            total += v
        return total % q

    def substitute(self, mapping: Mapping, ring: Ring | None = None) -> "Polynomial":
        """Replace variables (by index or name) with polynomials or constants.

        With ``ring`` given the result lives there; unsubstituted variables are
        carried over by name and must exist in the target ring."""
        target = ring or self.ring
        subs: dict[int, Polynomial] = {}
        for k, v in mapping.items():
            i = k if isinstance(k, int) else self.ring.index(k)
            subs[i] = v if isinstance(v, Polynomial) else target.const(int(v))
        keep = {}
        for i, name in enumerate(self.ring.variables):
            if i not in subs:
                keep[i] = target.index(name) if target is not self.ring else i
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = subs[i] ** e
            return powers[key]

        acc: dict = {}
        q = target.q
        for m, c in self.terms.items():
            base = [0] * target.nvars
            for i, e in enumerate(m):
                if e and i in keep:
                    base[keep[i]] += e
            part = Polynomial(target, {tuple(base): c}, _clean=False)
            for i, e in enumerate(m):
                if e and i in subs:
                    part = part * power(i, e)
            for mm, cc in part.terms.items():
                acc[mm] = (acc.get(mm, 0) + cc) % q
        return Polynomial(target, {m: c for m, c in acc.items() if c}, _clean=False)

    def change_ring(self, ring: Ring) -> "Polynomial":
        """Map into a ring containing all variables used here (matched by name)."""
        idx = [ring.index(v) if v in ring.variables else None for v in self.ring.variables]
        t = {}
        for m, c in self.terms.items():
            mm = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    if idx[i] is None:
                        raise ValueError(f"variable {self.ring.variables[i]} missing in target ring")
                    mm[idx[i]] = e
            t[tuple(mm)] = c
        return Polynomial(ring, t, _clean=False)

    # rendering
    def to_str(self, order=DRL) -> str:
        if not self.terms:
            return "0"
        F = self.ring.field
        out = []
        for m, c in self.sorted_terms(order):
            s = F.symmetric(c)
            sign = "-" if s < 0 else "+"
            a = abs(s)
            ms = self.ring.mono_str(m)
            if ms == "1":
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a}*{ms}"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def poly_arith(f: Polynomial, g, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scalar_mul":
        return f.scale(int(g))
    raise ValueError(f"unknown operation {op!r}")


def compare(order, a: Monomial, b: Monomial) -> str:
    c = as_order(order).compare(tuple(a), tuple(b))
    return {-1: "less", 0: "equal", 1: "greater"}[c]


def leading_term(f: Polynomial, order=DRL) -> tuple[Monomial, int]:
    return f.leading_term(order)


def divide(f: Polynomial, divisors: Sequence[Polynomial], order=DRL):
    """Multivariate division; returns (quotients, remainder).

    Terms are processed from the greatest down, each reducible term is reduced
    by the first divisor whose leading monomial divides it."""
    order = as_order(order)
    if any(g.is_zero() for g in divisors):
        raise ValueError("zero divisor")
    ring, q = f.ring, f.ring.q
    for g in divisors:
        f._check(g)
    lead = [g.leading_term(order) for g in divisors]
    inv = [inverse_mod(c, q) for _, c in lead]
    quot: list[dict] = [{} for _ in divisors]
    p = dict(f.terms)
    heap = [(order.desc_key(m), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, 0)
        if not c:
            continue
        for j, (lm, _) in enumerate(lead):
            if mono_divides(lm, m):
                t = mono_div(m, lm)
                k = c * inv[j] % q
                quot[j][t] = (quot[j].get(t, 0) + k) % q
                for gm, gc in divisors[j].terms.items():
                    mm = mono_mul(gm, t)
                    if mm == m:
                        continue
                    old = p.get(mm)
                    v = ((old or 0) - k * gc) % q
                    if v:
                        p[mm] = v
                        if old is None:
                            heapq.heappush(heap, (order.desc_key(mm), mm))
                    elif old is not None:
                        del p[mm]
                break
        else:
            rem[m] = c
    return [Polynomial(ring, t) for t in quot], Polynomial(ring, rem, _clean=False)


def reduce(f: Polynomial, divisors: Sequence[Polynomial], order=DRL) -> Polynomial:
    return divide(f, divisors, order)[1]


def s_polynomial(f: Polynomial, g: Polynomial, order=DRL) -> Polynomial:
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of zero")
    (mf, cf), (mg, cg) = f.leading_term(order), g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    q = f.ring.q
    return f.mul_term(mono_div(lcm, mf), inverse_mod(cf, q)) - g.mul_term(mono_div(lcm, mg), inverse_mod(cg, q))


def homogenize(f: Polynomial) -> Polynomial:
    return f.homogenize()


def dehomogenize(f: Polynomial) -> Polynomial:
    return f.dehomogenize()


def top_component(f: Polynomial) -> Polynomial:
    return f.top_component()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _Parser:
    """Recursive-descent parser for the canonical text rendering (and a bit more:
    parentheses, ``**`` and implicit integer powers)."""

    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial near {text[pos:pos + 10]!r}")
            num, name, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif name is not None:
                self.tokens.append(("name", name))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ValueError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing input at token {self.peek()}")
        return p

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self):
        p = self.power()
        while self.peek() == ("op", "*"):
            self.take()
            p = p * self.power()
        return p

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer")
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring.variables:
                raise ValueError(f"unknown variable {val!r}")
            return self.ring.gen(val)
        if val == "(":
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return p
        if val == "-":
            return -self.power()
        raise ValueError(f"unexpected token {val!r}")
