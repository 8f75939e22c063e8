import pytest
import sympy
from hypothesis import given, strategies as st

from aogb.gf import FieldElement, PrimeField, field_arith, inverse_mod, is_permutation_exponent, is_prime

PRIMES = [2, 3, 5, 7, 11, 13, 23, 29, 101, 65537, 2**61 - 1]


def test_is_prime_matches_sympy_below_5000():
    assert [n for n in range(5000) if is_prime(n)] == list(sympy.primerange(0, 5000))


@given(st.integers(min_value=2, max_value=2**80))
def test_is_prime_matches_sympy_large(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.sampled_from(PRIMES), st.integers())
def test_inverse(q, a):
    if a % q == 0:
        with pytest.raises(ZeroDivisionError):
            inverse_mod(a, q)
    else:
        assert a * inverse_mod(a, q) % q == 1


@pytest.mark.parametrize("q", [5, 7, 11, 13, 23, 29, 31])
@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_permutation_exponent_brute_force(q, d):
    assert is_permutation_exponent(d, q) == (len({pow(x, d, q) for x in range(q)}) == q)


@given(st.sampled_from(PRIMES[:8]), st.integers(), st.integers(), st.sampled_from(["add", "sub", "mul", "div"]))
def test_field_element_ops_match_int_arithmetic(q, a, b, op):
    F = PrimeField(q)
    x, y = F(a), F(b)
    if op == "div" and b % q == 0:
        with pytest.raises(ZeroDivisionError):
            field_arith(x, y, op)
        return
    want = {"add": a + b, "sub": a - b, "mul": a * b,
            "div": a * pow(b, -1, q) if b % q else None}[op] % q
    assert field_arith(x, y, op) == F(want)


def test_field_checks():
    with pytest.raises(ValueError):
        PrimeField(12)
    with pytest.raises(ValueError):
        FieldElement(7, PrimeField(7))
    with pytest.raises(ValueError):
        field_arith(PrimeField(5)(1), PrimeField(7)(1), "add")
    assert PrimeField(11).symmetric(10) == -1
    assert PrimeField(7)(3) ** -1 == PrimeField(7)(5)
