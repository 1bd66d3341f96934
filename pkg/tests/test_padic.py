from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from waldperiods.errors import ConfigError, InverseOfZero, NotASquare
from waldperiods.padic import (
    FieldDescriptor,
    Mat2,
    QuadExtDescriptor,
    hilbert_symbol,
    is_square_mod,
    legendre,
    padic_sqrt,
    unit_quotient_table,
    vp_int,
)

PRIMES = st.sampled_from([3, 5, 7])
INTS = st.integers(min_value=-10**6, max_value=10**6)


def rationals():
    return st.builds(Fraction, INTS, st.integers(min_value=1, max_value=500))


def vp_frac(x: Fraction, p: int) -> int:
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def close(x, r: Fraction, p: int, digits: int) -> bool:
    """x agrees with the rational r to ``digits`` p-adic digits beyond v(r)."""
    if r == 0:
        return x.is_zero() or x.val >= digits
    d = x.to_fraction() - r
    return d == 0 or vp_frac(d, p) >= vp_frac(r, p) + digits


@given(PRIMES, rationals(), rationals())
def test_field_ops_match_rationals(p, a, b):
    F = FieldDescriptor(p, 12)
    x, y = F(a), F(b)
    assert close(x * y, a * b, p, 12)
    s = x + y
    floor = min(vp_frac(a, p) if a else 99, vp_frac(b, p) if b else 99) + 12
    diff = s.to_fraction() - (a + b)
    assert diff == 0 or vp_frac(diff, p) >= floor
    if b != 0:
        assert close(x / y, a / b, p, 12)


@given(PRIMES, rationals())
def test_valuation_and_inverse(p, a):
    assume(a != 0)
    F = FieldDescriptor(p, 10)
    x = F(a)
    assert x.val == vp_frac(a, p)
    assert x * x.inverse() == F(1)


def test_inverse_of_zero_raises():
    with pytest.raises(InverseOfZero):
        FieldDescriptor(3).zero().inverse()


@pytest.mark.parametrize("bad", [2, 4, 9, 1])
def test_field_rejects_bad_prime(bad):
    with pytest.raises(ConfigError):
        FieldDescriptor(bad)


def test_precision_guard_for_conductor():
    with pytest.raises(ConfigError):
        FieldDescriptor(3, 6, max_conductor=4)
    FieldDescriptor(3, 12, max_conductor=4)


def test_frac_and_int_mod():
    F = FieldDescriptor(5, 10)
    x = F(Fraction(7, 25))
    assert x.frac() == Fraction(7, 25)
    assert F(Fraction(1, 5) + 3).frac() == Fraction(1, 5)
    assert F(38).int_mod(2) == 13


@given(PRIMES, st.integers(min_value=1, max_value=10**5), st.integers(min_value=0, max_value=3))
def test_sqrt_of_square(p, u, k):
    assume(u % p)
    F = FieldDescriptor(p, 12)
    x = F(u * p**k) * F(u * p**k)
    r = padic_sqrt(x)
    assert r * r == x


@given(PRIMES, st.integers(min_value=1, max_value=10**5))
def test_sqrt_existence_matches_legendre(p, u):
    assume(u % p)
    F = FieldDescriptor(p, 10)
    if legendre(u, p) == 1:
        assert padic_sqrt(F(u)) ** 2 == F(u)
    else:
        with pytest.raises(NotASquare):
            padic_sqrt(F(u))
    with pytest.raises(NotASquare):
        padic_sqrt(F(u * p))


@given(PRIMES, st.integers(min_value=1, max_value=10**4), st.integers(min_value=1, max_value=3))
def test_is_square_mod_bruteforce(p, u, m):
    F = FieldDescriptor(p, 10)
    mod = p**m
    squares = {x * x % mod for x in range(mod)}
    assert is_square_mod(F(u), m) == (u % mod in squares)


NONZERO = st.integers(min_value=1, max_value=10**4).flatmap(
    lambda a: st.sampled_from([a, -a]))


@given(PRIMES, NONZERO, NONZERO, NONZERO)
def test_hilbert_symbol_identities(p, a, b, c):
    F = FieldDescriptor(p, 10)
    A, B, C = F(a), F(b), F(c)
    assert hilbert_symbol(A, B) == hilbert_symbol(B, A)
    assert hilbert_symbol(A, B * C) == hilbert_symbol(A, B) * hilbert_symbol(A, C)
    assert hilbert_symbol(A, -A) == 1
    if a != 1:
        assert hilbert_symbol(A, F(1 - a)) == 1


def test_hilbert_symbol_norm_oracle():
    """(a, b) = 1 iff b is a norm from Q_p(sqrt a): brute force on residues."""
    p = 3
    F = FieldDescriptor(p, 10)
    for a in (-1, 2, 3, 6, -3):
        norms = set()
        mod = p**4
        for x in range(mod):
            for y in range(mod):
                n = (x * x - a * y * y) % mod
                norms.add(n)
        for b in (2, 5, 7, -1, 3, 6):
            # unit b with v(b) = 0: a norm iff some x^2 - a y^2 = b mod p^4 (Hensel)
            if b % p == 0:
                continue
            assert (hilbert_symbol(F(a), F(b)) == 1) == (b % mod in norms)


@given(st.sampled_from([3, 5]), INTS, INTS, INTS, INTS)
def test_quadratic_extension_norm_and_inverse(p, a, b, c, d):
    assume((a, b) != (0, 0) and (c, d) != (0, 0))
    E = QuadExtDescriptor(FieldDescriptor(p, 12), Fraction(p))
    x, y = E(a, b), E(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x * x.inverse() == E(1)
    assert x.valuation() == vp_frac(Fraction(a * a - p * b * b), p)


@given(st.sampled_from([3, 5]), INTS, INTS)
def test_unit_part(p, a, b):
    assume((a, b) != (0, 0))
    E = QuadExtDescriptor(FieldDescriptor(p, 12), Fraction(p))
    x = E(a, b)
    k, u = x.unit_part()
    assert u.valuation() == 0
    assert E.uniformizer() ** k * u == x


def test_ramification_flags():
    F = FieldDescriptor(5)
    assert QuadExtDescriptor(F, Fraction(10)).ramified
    assert not QuadExtDescriptor(F, Fraction(2)).ramified


@given(st.lists(INTS, min_size=8, max_size=8))
def test_matrix_inverse_and_det(v):
    F = FieldDescriptor(3, 12)
    g = Mat2.from_rows(F, [v[:2], v[2:4]])
    h = Mat2.from_rows(F, [v[4:6], v[6:]])
    assume(not g.det().is_zero())
    assert g * g.inverse() == Mat2.identity(F)
    assert (g * h).det() == g.det() * h.det()


@pytest.mark.parametrize("D", [3, 6, -1])
@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_unit_quotient_size_and_closure(D, c):
    E = QuadExtDescriptor(FieldDescriptor(3), Fraction(D))
    U = unit_quotient_table(E, c)
    assert len(U) == U.expected_size()
    codes = set(U.codes)
    for x in list(U.codes)[:20]:
        for y in list(U.codes)[:20]:
            assert U.mul(x, y) in codes
    for x in U.codes:
        assert U.code_of(U.representative(x)) == x


def test_unit_quotient_mul_matches_field_arithmetic():
    E = QuadExtDescriptor(FieldDescriptor(3), Fraction(3))
    U = unit_quotient_table(E, 4)
    for x in U.codes[::3]:
        for y in U.codes[::5]:
            prod = U.representative(x) * U.representative(y)
            assert U.code_of(prod) == U.mul(x, y)
