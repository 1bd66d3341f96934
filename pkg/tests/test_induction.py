import random
from fractions import Fraction

import pytest
from waldperiods.characters import enumerate_characters
from waldperiods.errors import UnsupportedCase
from waldperiods.induction import (
    CASE1,
    OrderLattice,
    ThetaTilde,
    classify,
    decompose_J,
    decompose_J_bruteforce,
    kirillov_support,
    matrix_coefficient,
    phi_angle,
    whittaker_restriction,
)
from waldperiods.padic import FieldDescriptor, Mat2, QuadExtDescriptor


def ext(p, D, K=14):
    return QuadExtDescriptor(FieldDescriptor(p, K), Fraction(D))


def thetas(p, D, c):
    L = ext(p, D)
    return [t for t in enumerate_characters(L, c, trivial_on_F=True) if t.conductor == c]


@pytest.mark.parametrize("p,D", [(3, 3), (3, -3), (5, 10)])
@pytest.mark.parametrize("c", [2, 4])
def test_classify_ramified(p, D, c):
    for theta in thetas(p, D, c)[:4]:
        data = classify(theta)
        assert data.case == CASE1
        assert data.n == c // 2 and data.c_pi == c + 1
        assert data.Dprime == data.y * data.y * data.L.Dp
        # alpha_theta corresponds to 1/(uniformizer^c sqrt D')
        s = data.L.sqrtD() ** c * data.sqrtDprime()
        assert (data.alpha.alpha * s) == data.L(1)


def test_classify_rejects_small_conductor():
    L = ext(3, 3)
    with pytest.raises(UnsupportedCase):
        classify(enumerate_characters(L, 2, trivial_on_F=True)[0])


def test_lattice_bounds():
    assert OrderLattice(2, 2).bounds() == (1, 1, 2, 1)
    assert OrderLattice(2, 3).bounds() == (2, 1, 2, 2)
    assert OrderLattice(1, 2).bounds() == (2, 2, 2, 2)


def _random_matrix(F, rng, spread=3):
    p = F.p
    while True:
        entries = [Fraction(rng.randint(-p**3, p**3), p ** rng.randint(0, spread)) * p ** rng.randint(0, spread)
                   for _ in range(4)]
        g = Mat2.from_rows(F, [entries[:2], entries[2:]])
        if not g.det().is_zero():
            return g


def _near_J(data, rng):
    """An element l k with k in K_A(n) perturbed at a random level (in or out of J)."""
    L, F = data.L, data.F
    p = F.p
    l = L(rng.randint(1, p**3), rng.randint(0, p**3)) * L.sqrtD() ** rng.randint(-2, 3)
    if l.valuation() == float("inf"):
        l = L(1)
    b = data.lattice.bounds()
    shift = rng.choice([0, 0, -1])
    X = Mat2.from_rows(F, [[rng.randint(0, p**2) * p ** max(0, b[0] + shift), rng.randint(0, p**2) * p ** max(0, b[1] + shift)],
                           [rng.randint(0, p**2) * p ** max(0, b[2] + shift), rng.randint(0, p**2) * p ** max(0, b[3] + shift)]])
    k = Mat2.identity(F) + X
    if k.det().is_zero():
        k = Mat2.identity(F)
    return data.embed(l) * k


@pytest.mark.parametrize("p,D,c", [(3, 3, 4), (3, -3, 4), (5, 10, 2), (5, 5, 4)])
def test_decompose_matches_bruteforce(p, D, c):
    data = classify(thetas(p, D, c)[0])
    rng = random.Random(p * 100 + c)
    tt = ThetaTilde(data)
    hits = 0
    for i in range(60):
        g = _near_J(data, rng) if i % 3 else _random_matrix(data.F, rng)
        fast = decompose_J(g, data)
        slow = decompose_J_bruteforce(g, data, shuffle_seed=i)
        assert (fast is None) == (slow is None)
        if fast is not None:
            hits += 1
            l, k = fast
            assert data.embed(l) * k == g
            assert data.lattice.contains(k)
            # the value of theta-tilde does not depend on the decomposition
            assert tt.angle_of(*fast) == tt.angle_of(*slow)
    assert hits > 10


@pytest.mark.parametrize("p,D,c", [(3, 3, 4), (5, 10, 2)])
def test_theta_tilde_is_a_character_of_J(p, D, c):
    data = classify(thetas(p, D, c)[-1])
    rng = random.Random(7)
    elements = [g for g in (_near_J(data, rng) for _ in range(40)) if decompose_J(g, data) is not None]
    assert len(elements) >= 10
    for g, h in zip(elements, elements[1:]):
        assert phi_angle(g * h, data) == (phi_angle(g, data) + phi_angle(h, data)) % 1
        assert phi_angle(g.inverse(), data) == (-phi_angle(g, data)) % 1


def test_matrix_coefficient_at_identity_and_center(data3):
    F = data3.F
    assert matrix_coefficient(Mat2.identity(F), data3) == 1
    # theta trivial on F: the center acts trivially
    for z in (2, 3, Fraction(1, 3), 5):
        assert matrix_coefficient(Mat2.diag(F, z, z), data3) == 1


def test_matrix_coefficient_vanishes_off_J(data3):
    F = data3.F
    assert matrix_coefficient(Mat2.from_rows(F, [[1, 0], [1, 1]]), data3) == 0
    assert decompose_J_bruteforce(Mat2.from_rows(F, [[1, 0], [1, 1]]), data3) is None


def test_kirillov_support_case1():
    data = classify(thetas(3, 3, 4)[0])
    assert kirillov_support(data) == (2, 1)


def test_whittaker_support(data3):
    """W(diag(a,1)) is constant on p^{-k} U_F(m) and zero outside (one representative each)."""
    k, m = kirillov_support(data3)
    F = data3.F
    p = F.p
    inside = [Fraction(u, p**k) for u in (1, 4, 7, -2)]
    values = [whittaker_restriction(data3, a).value for a in inside]
    assert not values[0].is_zero()
    assert all(v == values[0] for v in values)
    for a in (Fraction(2, p**k), Fraction(1, p**(k - 1)), Fraction(1, p**(k + 1))):
        assert whittaker_restriction(data3, a).value.is_zero()
