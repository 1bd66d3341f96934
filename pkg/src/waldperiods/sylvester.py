"""The 3-adic computation attached to the curves x^3 + y^3 = p, p = 4, 7 mod 9.

Theta_3 and chi_3 are given by their values on generators of
O^x / (1 + 9 O) for K_3 = Q_3(sqrt -3); theta_3 is obtained from Theta_3 by
the Langlands twist, and beta_3 is the toric period of the newform for the
embedding sqrt(-3) -> [[a, b/9], [27 c, -a]] = M^{-1} [[0, 1], [-3, 0]] M,
M = [[-9c, a/3], [0, 1]].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .characters import (
    AdditiveChar,
    AlphaElement,
    MultChar,
    alpha_of_char,
    check_alpha,
    gauss_sum,
    lambda_function,
    langlands_twist,
)
from .cyclotomic import CycloNumber, sqrt_prime
from .errors import BadResidue, ConfigError, HypothesisViolation
from .induction import SupercuspidalData, classify
from .padic import FieldDescriptor, Mat2, QuadExtDescriptor, vp_int
from .periods import (
    EmbeddingSpec,
    IntegralResult,
    TestVectorSpec,
    diagonal_value,
    period_integral,
    solve_test_vector_equation,
    unit_residues,
)

P = 3
D = Fraction(-3)
CONDUCTOR = 4

# generators of O^x / U(4) for Q_3(sqrt -3) as (a, b) = a + b sqrt(-3)
GENERATORS = ((-1, 0), (1, 1), (1, -1), (1, 3))
# Theta_3 on GENERATORS as angles (-1, omega^2, omega, omega) and Theta_3(sqrt -3) = i
THETA3_ANGLES = (Fraction(1, 2), Fraction(2, 3), Fraction(1, 3), Fraction(1, 3))
THETA3_UNIF = Fraction(1, 4)
# chi_3(1 + sqrt -3) = omega (p = 4 mod 9) or omega^2 (p = 7 mod 9); chi_3(1 + 3 sqrt -3) = omega
CHI3_A = {4: Fraction(1, 3), 7: Fraction(2, 3)}
CHI3_B = Fraction(1, 3)


def field(K: int = 14) -> QuadExtDescriptor:
    return QuadExtDescriptor(FieldDescriptor(P, K), D)


def _gens(E: QuadExtDescriptor):
    return [E(a, b) for a, b in GENERATORS]


def theta3_from_table(E: QuadExtDescriptor | None = None) -> MultChar:
    E = E or field()
    return MultChar.from_generators(E, CONDUCTOR, _gens(E), THETA3_ANGLES, THETA3_UNIF)


def residue_class(p: int) -> int:
    r = p % 9
    if r not in (4, 7) or not isprime(p):
        raise BadResidue(f"p = {p} is not a prime congruent to 4 or 7 mod 9")
    return r


def chi3_from_table(p_mod_9: int, E: QuadExtDescriptor | None = None) -> MultChar:
    """chi_3 is trivial on Z_3^x, so chi(1 - sqrt -3) = -chi(1 + sqrt -3) and chi(-1) = 1."""
    if p_mod_9 not in CHI3_A:
        raise BadResidue(f"residue {p_mod_9} mod 9 is not 4 or 7")
    E = E or field()
    A = CHI3_A[p_mod_9]
    return MultChar.from_generators(E, CONDUCTOR, _gens(E), (0, A, -A, CHI3_B), 0)


@dataclass(frozen=True)
class Theta3Build:
    Theta: MultChar
    theta: MultChar
    delta: MultChar
    alpha_Theta: AlphaElement
    lam: CycloNumber  # lambda_{K_3/Q_3}(psi)
    tau: CycloNumber  # Gauss sum of eta against the level-one character psi(x/3)
    delta_at_sqrtD: CycloNumber


def build_theta3(E: QuadExtDescriptor | None = None) -> Theta3Build:
    E = E or field()
    psi = AdditiveChar(E.F)
    Theta = theta3_from_table(E)
    theta, delta, alpha = langlands_twist(Theta, psi)
    lam = lambda_function(E, psi)
    tau = gauss_sum(E, AdditiveChar(E.F, Fraction(1, P)))
    return Theta3Build(Theta, theta, delta, alpha, lam, tau, delta.value(E.sqrtD()))


@dataclass(frozen=True)
class TwistReport:
    p_mod_9: int
    trivial: bool
    conductor: int
    alpha: AlphaElement | None
    alpha_matches: bool | None  # alpha of theta chi-bar in the class of 1/(3 sqrt -3)

    @property
    def ok(self) -> bool:
        if self.p_mod_9 == 7:
            return self.trivial
        return self.conductor == 2 and bool(self.alpha_matches)


def verify_twist(p_mod_9: int, build: Theta3Build | None = None) -> TwistReport:
    build = build or build_theta3()
    E = build.theta.base
    nu = build.theta * chi3_from_table(p_mod_9, E).bar()
    c = nu.conductor
    if c < 2:
        return TwistReport(p_mod_9, nu.is_trivial(), c, None, None)
    psi = AdditiveChar(E)
    alpha = alpha_of_char(nu, psi)
    expected = (E(3) * E.sqrtD()).inverse()
    return TwistReport(p_mod_9, nu.is_trivial(), c, alpha,
                         alpha.same_class(expected) and check_alpha(nu, psi, expected))


@dataclass(frozen=True)
class SylvesterParams:
    p: int
    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def for_prime(cls, p: int) -> "SylvesterParams":
        residue_class(p)
        P_ = Fraction(p)
        a = 4 * P_ + 17 + Fraction(72, p)
        b = -8 * P_ - 36 - Fraction(162, p)
        c = (18 * P_ + 72 + Fraction(288, p)) / 27
        params = cls(p, a, b, c)
        params.check()
        return params

    def invariants(self) -> dict:
        """Verdicts for the divisibility and congruence pattern of a, b, c."""
        r = residue_class(self.p)
        va = vp_int(self.a.numerator, 3) - vp_int(self.a.denominator, 3)

        def mod9(x: Fraction) -> int:
            return x.numerator * pow(x.denominator, -1, 9) % 9

        return {
            "a_valuation": va == 1 if r == 4 else va >= 2,
            "a_exact_valuation": va == (1 if r == 4 else 2),
            "b_mod_9": mod9(self.b) == self.p % 9,
            "c_mod_9": mod9(self.c) == 8,
            "c_unit": mod9(self.c) % 3 != 0,
            "norm": -self.a**2 - 3 * self.b * self.c == 3,
        }

    def check(self) -> None:
        """Raise if a property the computation relies on fails.

        Only reported, not enforced: the congruence of c mod 9 (the period
        depends on c through the unit class of -9c) and the exact power of 3
        in a when p = 7 mod 9 (what matters is 9 | a, so that n(a/3) acts
        through a character; 27 | a happens, e.g. p = 79).
        """
        inv = self.invariants()
        for key in ("a_valuation", "b_mod_9", "c_unit", "norm"):
            if not inv[key]:
                raise HypothesisViolation(f"Sylvester parameter check failed: {key}")

    def embedding_matrix(self, F: FieldDescriptor) -> Mat2:
        return Mat2(F(self.a), F(self.b / 9), F(27 * self.c), F(-self.a))

    def conjugator(self, F: FieldDescriptor) -> Mat2:
        """M with M^{-1} [[0, 1], [D, 0]] M equal to the embedding matrix."""
        return Mat2(F(-9 * self.c), F(self.a / 3), F.zero(), F(1))


@dataclass
class SylvesterReport:
    p: int
    p_mod_9: int
    beta: CycloNumber
    beta_conjugated: CycloNumber
    ratio: Fraction
    expected_beta: Fraction
    expected_ratio: Fraction
    branch: str
    diagonal: dict
    result: IntegralResult
    twist: TwistReport
    Dprime: Fraction

    @property
    def ok(self) -> bool:
        return (self.beta == self.expected_beta and self.beta_conjugated == self.beta
                and self.ratio == self.expected_ratio and self.twist.ok)


EXPECTED_BETA = {7: Fraction(1), 4: Fraction(1, 2)}
ADMISSIBLE_VOLUME = Fraction(2)  # beta of the admissible vector: volume of F^x \ E^x


def sylvester_data(K: int = 14) -> tuple[Theta3Build, SupercuspidalData]:
    build = build_theta3(field(K))
    data = classify(build.theta)
    if data.Dprime.to_fraction() != D:
        raise ConfigError("expected D' = -3 for theta_3")
    return build, data


def beta3_newform(p: int, K: int = 14, max_refine: int = 3) -> SylvesterReport:
    """beta_3 = {pi(M) f_3, pi(M) f_3} with f_3 = pi(diag(1/9, 1)) (translated newform)."""
    params = SylvesterParams.for_prime(p)
    r = residue_class(p)
    build, data = sylvester_data(K)
    F = data.F
    E = data.L
    chi = chi3_from_table(r, E)
    newform = TestVectorSpec.translated_newform(data)
    f3 = newform.left_translate(Mat2.diag(F, Fraction(1, 9)))
    M = params.conjugator(F)
    # M^{-1} [[0,1],[D,0]] M reproduces the displayed embedding
    if M.inverse() * E.sqrtD().embed_matrix() * M != params.embedding_matrix(F):
        raise HypothesisViolation("conjugator does not reproduce the embedding")
    std = period_integral(data, chi, f3.left_translate(M), f3.left_translate(M), max_refine=max_refine)
    conj = period_integral(data, chi, f3, f3, EmbeddingSpec(E, M), max_refine=max_refine)
    u = params.a / 3
    diag = {}
    for x in unit_residues(P, 1):
        diag[x] = diagonal_value(data, chi, x, u).value
    if r == 7:
        branch = "single nonvanishing term; theta chi-bar trivial"
    else:
        sol = solve_test_vector_equation(data, chi, u)
        branch = f"l = {sol.l}, n - l odd, u = a/3, solutions {sol.solutions}"
    beta = std.value
    ratio = ADMISSIBLE_VOLUME / beta.to_rational() if not beta.is_zero() else None
    return SylvesterReport(p, r, beta, conj.value, ratio, EXPECTED_BETA[r],
                           ADMISSIBLE_VOLUME / EXPECTED_BETA[r], branch, diag, std,
                           verify_twist(r, build), data.Dprime.to_fraction())


def admissible_ratio(p: int) -> Fraction:
    return beta3_newform(p).ratio


def sqrt3_gauss_identity() -> bool:
    """tau(eta_3, psi(x/3)) = -i sqrt 3 and lambda = -i."""
    b = build_theta3()
    minus_i = CycloNumber.root_of_unity(4, 3)
    return b.tau == minus_i * sqrt_prime(3) and b.lam == minus_i
