import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waldperiods.cyclotomic import (
    CycloNumber,
    RationalAngle,
    cyclo_sum,
    order_cap,
    sqrt_prime,
)
from waldperiods.errors import NotRational, OrderBudgetExceeded

ORDERS = st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12])
SMALL = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyclo(draw, N=None):
    N = N or draw(ORDERS)
    vec = draw(st.lists(SMALL, min_size=N, max_size=N))
    return CycloNumber.from_exponent_vector(N, vec)


def near(x: CycloNumber, z: complex) -> bool:
    return abs(x.approx() - z) < 1e-9 * (1 + abs(z))


@given(cyclo(), cyclo())
def test_ring_ops_match_floating_point(x, y):
    assert near(x + y, x.approx() + y.approx())
    assert near(x * y, x.approx() * y.approx())
    assert near(x - y, x.approx() - y.approx())
    assert near(x.conj(), x.approx().conjugate())


@given(cyclo(), cyclo(), cyclo())
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(cyclo())
def test_division_and_abs_squared(x):
    if x.is_zero():
        return
    assert (x / x) == 1
    assert x * x.inverse() == 1
    assert near(x.norm_squared(), abs(x.approx()) ** 2)
    assert x.norm() != 0


@given(cyclo(N=4))
def test_abs_squared_rational_in_gaussian_field(x):
    assert near(CycloNumber.from_rational(x.abs_squared()), abs(x.approx()) ** 2)


@settings(max_examples=25)
@given(cyclo())
def test_reduce_order_preserves_value(x):
    r = x.reduce_order()
    assert r == x
    assert x.N % r.N == 0


@settings(max_examples=25)
@given(cyclo())
def test_json_round_trip(x):
    assert CycloNumber.from_json(x.to_json()) == x


@given(st.integers(min_value=1, max_value=24), st.integers(min_value=-50, max_value=50))
def test_roots_of_unity(N, k):
    z = CycloNumber.root_of_unity(N, k)
    assert near(z, cmath.exp(2j * cmath.pi * k / N))
    assert z ** N == 1
    a = z.as_root_of_unity()
    assert a is not None and a.as_fraction() == RationalAngle(k, N).as_fraction()


def test_equal_values_in_different_orders():
    assert CycloNumber.root_of_unity(4, 2) == -1
    assert CycloNumber.root_of_unity(6, 2) == CycloNumber.root_of_unity(3, 1)
    w = CycloNumber.root_of_unity(3)
    assert 1 + w + w * w == 0


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_sqrt_prime(p):
    s = sqrt_prime(p)
    assert s * s == p
    assert near(s, p**0.5)


def test_from_histogram_matches_sum():
    N = 12
    counts = np.array([3, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 5])
    direct = cyclo_sum(CycloNumber.root_of_unity(N, k) * int(c) for k, c in enumerate(counts))
    assert CycloNumber.from_histogram(N, counts, Fraction(1, 4)) == direct * Fraction(1, 4)


def test_to_rational_raises_for_irrational():
    with pytest.raises(NotRational):
        CycloNumber.root_of_unity(3).to_rational()


def test_order_cap():
    with order_cap(10):
        with pytest.raises(OrderBudgetExceeded):
            CycloNumber.root_of_unity(12)
    CycloNumber.root_of_unity(12)


@given(st.integers(-100, 100), st.integers(1, 50), st.integers(-100, 100), st.integers(1, 50))
def test_rational_angle_group(a, b, c, d):
    x, y = RationalAngle(a, b), RationalAngle(c, d)
    assert 0 <= x.num < x.den
    assert (x + y).as_fraction() == (Fraction(a, b) + Fraction(c, d)) % 1
    assert (x - x).is_zero()
