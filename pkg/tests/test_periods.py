import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waldperiods.characters import enumerate_characters
from waldperiods.cyclotomic import CycloNumber
from waldperiods.errors import IncompatibleCentralCharacter, NotOnSupport
from waldperiods.induction import classify, matrix_coefficient
from waldperiods.padic import FieldDescriptor, Mat2, QuadExtDescriptor
from waldperiods.periods import (
    EmbeddingSpec,
    TestVectorSpec,
    bar_symmetry_check,
    cross_term_structure,
    equation_coefficients,
    exact_solutions,
    period_integral,
    period_integral_pointwise,
    phase_factor,
    required_depth,
    solve_test_vector_equation,
    support_of_integral,
    support_predicate,
    torus_representatives,
)


def ext(p, D, K=14):
    return QuadExtDescriptor(FieldDescriptor(p, K), Fraction(D))


def pairs(p, D, c):
    """(data, chi) for theta of conductor c and all chi trivial on F with c(chi) <= c."""
    L = ext(p, D)
    thetas = [t for t in enumerate_characters(L, c, trivial_on_F=True) if t.conductor == c]
    chis = enumerate_characters(L, c, trivial_on_F=True)
    return [(classify(t), chi) for t in thetas[:2] for chi in chis]


P3 = pairs(3, 3, 4)
P3m = pairs(3, -3, 4)
P5 = pairs(5, 10, 2)

VECTORS = [(0, 1), (0, 2), (1, 4), (Fraction(1, 3), 5), (2, 7), (0, 4)]


def nonzero_cases(pairs_, count):
    """(data, chi, spec) with a nonvanishing diagonal period, spread over the list."""
    out = []
    for data, chi in pairs_:
        for u, v in VECTORS:
            spec = TestVectorSpec.translate(data.F, u, v)
            if not period_integral(data, chi, spec, spec).value.is_zero():
                out.append((data, chi, spec))
                break
        if len(out) == count:
            break
    return out


NZ3 = nonzero_cases(P3, 6)
NZ3m = nonzero_cases(P3m, 6)


def naive_period(data, chi, g1, g2, m):
    """Sum of chi(t) Phi(g2^{-1} t g1) over the torus representatives, term by term."""
    total = CycloNumber.zero()
    g2inv = g2.inverse()
    for t, w in torus_representatives(data.L, m):
        val = matrix_coefficient(g2inv * t.embed_matrix() * g1, data)
        if not val.is_zero():
            total = total + val * chi.value(t) * w
    return total


@pytest.mark.parametrize("p,D", [(3, 3), (5, 10)])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_torus_weights_total_two(p, D, m):
    reps = torus_representatives(ext(p, D), m)
    assert sum(w for _, w in reps) == 2
    assert len(reps) == 2 * p**m


def test_torus_representatives_are_distinct_mod_F():
    L = ext(3, 3)
    reps = [t for t, _ in torus_representatives(L, 2)]
    for i, s in enumerate(reps):
        for t in reps[i + 1:]:
            q = s / t
            assert not (q.b.val - q.a.val >= 2 and q.valuation() % 2 == 0)


@pytest.mark.parametrize("case", NZ3 + NZ3m)
def test_engine_matches_naive_sum(case):
    data, chi, spec = case
    g = spec.terms[0][1]
    res = period_integral(data, chi, spec, spec)
    assert res.certificate["m_plus_one_equal"]
    assert not res.value.is_zero()
    assert res.value == naive_period(data, chi, g, g, res.m + 1)
    other = Mat2.unipotent(data.F, 1) * Mat2.diag(data.F, 2)
    off = period_integral(data, chi, spec, TestVectorSpec.from_matrices([other])).value
    assert off == naive_period(data, chi, g, other, res.m + 2)


def test_engine_matches_naive_sum_p5():
    rng = random.Random(3)
    for data, chi in rng.sample(P5, 8):
        F = data.F
        g1 = Mat2.unipotent(F, 2) * Mat2.diag(F, 3)
        g2 = Mat2.diag(F, 7)
        s1 = TestVectorSpec.from_matrices([g1])
        s2 = TestVectorSpec.from_matrices([g2])
        res = period_integral(data, chi, s1, s2)
        assert res.value == naive_period(data, chi, g1, g2, res.m + 1)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(NZ3 + NZ3m), st.integers(1, 8), st.integers(0, 11))
def test_hermitian_and_sesquilinear(case, b, k):
    data, chi, s1 = case
    F = data.F
    s2 = TestVectorSpec.translate(F, 1, b if b % 3 else b + 1)
    z = CycloNumber.root_of_unity(12, k)
    I12 = period_integral(data, chi, s1, s2).value
    assert period_integral(data, chi, s2, s1).value == I12.conj()
    assert period_integral(data, chi, s1.scaled(z), s2).value == z * I12
    assert period_integral(data, chi, s1, s2.scaled(z)).value == z.conj() * I12
    both = s1 + s2
    expected = sum((period_integral(data, chi, x, y).value for x in (s1, s2) for y in (s1, s2)), CycloNumber.zero())
    assert period_integral(data, chi, both, both).value == expected
    assert not expected.is_zero()


@pytest.mark.parametrize("case", NZ3 + NZ3m)
def test_torus_equivariance(case):
    """{pi(t0) phi1, phi2} = chi(t0)^{-1} {phi1, phi2}."""
    data, chi, spec = case
    L = data.L
    base = period_integral(data, chi, spec, spec).value
    for t0 in (L(1, 1), L(2, 3), L.sqrtD(), L(4, 1) * L.sqrtD()):
        moved = spec.left_translate(t0.embed_matrix())
        assert period_integral(data, chi, moved, spec).value == base * chi.value(t0).conj()


@pytest.mark.parametrize("case", NZ3m[:3])
def test_conjugated_embedding(case):
    data, chi, single = case
    F = data.F
    spec = single + TestVectorSpec.translate(F, 0, 2).scaled(CycloNumber.root_of_unity(4))
    for M in (Mat2.from_rows(F, [[2, 1], [0, 1]]), Mat2.from_rows(F, [[1, 0], [3, 1]]), Mat2.diag(F, 9)):
        conj = period_integral(data, chi, spec, spec, EmbeddingSpec(data.L, M)).value
        moved = spec.left_translate(M)
        assert conj == period_integral(data, chi, moved, moved).value


@pytest.mark.parametrize("case", NZ3 + NZ3m)
def test_pointwise_matches_pairwise(case):
    data, chi, single = case
    spec = TestVectorSpec.translated_newform(data)
    assert period_integral_pointwise(data, chi, single).value == period_integral(data, chi, single, single).value
    assert period_integral_pointwise(data, chi, spec).value == period_integral(data, chi, spec, spec).value


@pytest.mark.parametrize("case", NZ3 + NZ3m)
def test_bar_symmetry(case):
    data, chi, spec = case
    assert bar_symmetry_check(data, chi)
    assert bar_symmetry_check(data, chi, spec)


def test_required_depth_is_sufficient():
    """Going two levels past the analytic depth changes nothing."""
    data, chi = P3[5]
    F = data.F
    for v in (1, 2, 4):
        g = Mat2.diag(F, v)
        m = required_depth(data, chi, g, EmbeddingSpec(data.L))
        assert naive_period(data, chi, g, g, m) == naive_period(data, chi, g, g, m + 2)


def test_incompatible_central_character():
    L = ext(3, 3)
    data, _ = P3[0]
    bad = next(c for c in enumerate_characters(L, 2, trivial_on_F=False, uniformizer_values=[0])
               if not c.trivial_on_F())
    with pytest.raises(IncompatibleCentralCharacter):
        period_integral(data, bad, TestVectorSpec.minimal(data.F), TestVectorSpec.minimal(data.F))


# -- the quadratic equation -------------------------------------------------------------


def _congruence_oracle(data, chi, u):
    """Brute force of A v^2 - B v + C = 0 mod p^r over units v, from rational coefficients."""
    A, B, C, l = equation_coefficients(data, chi, u)
    p, n = data.F.p, data.n
    r = n - l // 2
    k = -(-n // 2)
    mod = p**r
    to_int = [x.to_fraction() for x in (A, B, C)]
    ints = [f.numerator * pow(f.denominator, -1, mod) % mod for f in to_int]
    return {v % p**k for v in range(mod) if v % p and (ints[0] * v * v - ints[1] * v + ints[2]) % mod == 0}


@pytest.mark.parametrize("pairs_", [P3, P3m, P5], ids=["3", "-3", "10"])
def test_solver_congruence_against_oracle(pairs_):
    for data, chi in pairs_:
        nu = data.theta * chi.bar()
        if nu.conductor == 0:
            continue
        for u in (0, 1):
            sol = solve_test_vector_equation(data, chi, u)
            assert set(sol.congruence_solutions) == _congruence_oracle(data, chi, u)
            if (data.n - sol.l) % 2 or u:
                assert set(sol.solutions) == set(sol.congruence_solutions)
            else:
                assert set(sol.solutions) <= set(sol.congruence_solutions)


def test_exact_roots_and_product_identity():
    checked = 0
    for data, chi in P5 + P3 + P3m:
        nu = data.theta * chi.bar()
        if nu.conductor == 0 or (data.n - nu.conductor // 2) % 2:
            continue
        sol = solve_test_vector_equation(data, chi)
        if not sol.solutions:
            continue
        A, B, C, _ = equation_coefficients(data, chi)
        v, vp = exact_solutions(data, chi)
        for x in (v, vp):
            assert A * x * x - B * x + C == data.F.zero()
        assert v * vp * data.L.Dp == data.Dprime
        checked += 1
    assert checked > 0


def test_support_predicate_shape():
    L = ext(3, 3)
    pred = support_predicate(1)
    assert pred(L(3, 1)) and pred(L(0, 1))
    assert not pred(L(1, 1)) and not pred(L(1, 0))


def test_phase_factor_off_support_raises():
    data, chi = P5[0]
    with pytest.raises(NotOnSupport):
        phase_factor(data, chi, 5, 1)


def test_support_scan_on_a_closed_form_case():
    for data, chi in P5:
        nu = data.theta * chi.bar()
        if nu.conductor == 0 or (data.n - nu.conductor // 2) % 2:
            continue
        if not solve_test_vector_equation(data, chi).solutions:
            continue
        v, vp = exact_solutions(data, chi)
        rep = support_of_integral(data, chi, v, vp)
        assert rep.match and rep.volume == rep.predicted_volume and rep.product_identity
        ct = cross_term_structure(data, chi, v.int_mod(5), vp.int_mod(5))
        assert ct.vanishing_ok and ct.magnitude_ok
        return
    pytest.fail("no closed-form configuration found")
