"""Toric period integrals {phi_1, phi_2} = int_{F^x \\ E^x} (pi(t) phi_1, phi_2) chi(t) dt.

Test vectors are finite combinations sum_i c_i pi(g_i) phi_0 of translates of the
minimal vector, so every pairing expands into integrals of the matrix
coefficient Phi(g_j^{-1} t g_i) chi(t).  Those are finite sums over the
representatives eps (1 + y sqrt D), eps in {1, sqrt D}, y in O / p^m, each of
measure q^{-m} (so F^x \\ E^x has volume 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .characters import AdditiveChar, MultChar, alpha_of_char, quotient
from .cyclotomic import CycloNumber
from .errors import (
    ConfigError,
    HypothesisViolation,
    IncompatibleCentralCharacter,
    NotOnSupport,
    NotRational,
    UnramifiedUnsupported,
    UnstableSum,
)
from .induction import CASE1, SupercuspidalData, ThetaTilde, decompose_J, kirillov_support, phi_angle
from .padic import INF, Mat2, PAdicScalar, QuadExtDescriptor, QuadExtScalar, is_square_mod, legendre, padic_sqrt

DEFAULT_MAX_REFINE = 3


def _ceil_half(m: int) -> int:
    return -((-m) // 2)


# -- embeddings and test vectors ----------------------------------------------------


@dataclass(frozen=True)
class EmbeddingSpec:
    """E^x -> GL_2(F): the standard embedding, optionally conjugated by M."""

    E: QuadExtDescriptor
    M: Mat2 | None = field(default=None, compare=False)

    def __call__(self, t: QuadExtScalar) -> Mat2:
        T = t.embed_matrix()
        if self.M is None:
            return T
        return self.M.inverse() * T * self.M

    def key(self):
        return ("std",) if self.M is None else ("conj", self.M.key())


@dataclass(frozen=True)
class TestVectorSpec:
    """sqrt(scale_sq) * sum_i c_i pi(g_i) phi_0."""

    __test__ = False  # not a pytest class

    terms: tuple
    scale_sq: Fraction = Fraction(1)

    @classmethod
    def minimal(cls, F) -> "TestVectorSpec":
        return cls(((CycloNumber.one(), Mat2.identity(F)),))

    @classmethod
    def translate(cls, F, u=0, v=1) -> "TestVectorSpec":
        """pi(n(u) diag(v, 1)) phi_0."""
        g = Mat2.unipotent(F, u) * Mat2(F(v), F.zero(), F.zero(), F(1))
        return cls(((CycloNumber.one(), g),))

    @classmethod
    def from_matrices(cls, mats: Sequence[Mat2], coeffs=None, scale_sq=1) -> "TestVectorSpec":
        coeffs = coeffs or [CycloNumber.one()] * len(mats)
        return cls(tuple(zip(coeffs, mats)), Fraction(scale_sq))

    @classmethod
    def translated_newform(cls, data: SupercuspidalData) -> "TestVectorSpec":
        """pi(diag(p^{c/e}, 1)) phi_new = N^{-1/2} sum_x pi(diag(x, 1)) phi_0."""
        F = data.F
        k = newform_depth(data)
        xs = unit_residues(F.p, k)
        mats = [Mat2.diag(F, x) for x in xs]
        return cls.from_matrices(mats, scale_sq=Fraction(1, len(xs)))

    def left_translate(self, g: Mat2) -> "TestVectorSpec":
        return TestVectorSpec(tuple((c, g * h) for c, h in self.terms), self.scale_sq)

    def scaled(self, c: CycloNumber) -> "TestVectorSpec":
        return TestVectorSpec(tuple((c * a, h) for a, h in self.terms), self.scale_sq)

    def __add__(self, other: "TestVectorSpec") -> "TestVectorSpec":
        if self.scale_sq != other.scale_sq:
            raise ConfigError("can only add specs with equal scale")
        return TestVectorSpec(self.terms + other.terms, self.scale_sq)


def newform_depth(data: SupercuspidalData) -> int:
    """Level of U_F in the Kirillov support of phi_0: the x in the newform expansion run mod p^this."""
    return kirillov_support(data)[1]


def unit_residues(p: int, k: int) -> list[int]:
    return [x for x in range(1, p**k) if x % p]


# -- torus ----------------------------------------------------------------------------


def torus_representatives(E: QuadExtDescriptor, m: int) -> list[tuple[QuadExtScalar, Fraction]]:
    """eps (1 + y sqrt D) with weight q^{-m}; total weight 2."""
    return list(_torus_representatives(E, m))


@lru_cache(maxsize=64)
def _torus_representatives(E: QuadExtDescriptor, m: int) -> tuple:
    if not E.ramified:
        raise UnramifiedUnsupported("torus sums implemented for ramified E only")
    if m < 0:
        raise ConfigError("m must be >= 0")
    p = E.p
    w = Fraction(1, p**m)
    out = []
    s = E.sqrtD()
    for eps in (0, 1):
        for y in range(p**m):
            t = E(1, y)
            out.append((s * t if eps else t, w))
    return tuple(out)


def _torus_points(E: QuadExtDescriptor, m: int):
    """(eps, y) index arrays matching torus_representatives order."""
    ys = np.arange(E.p**m, dtype=np.int64)
    eps = np.concatenate([np.zeros_like(ys), np.ones_like(ys)])
    return eps, np.concatenate([ys, ys])


# -- results ------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralResult:
    value: CycloNumber
    m: int
    m_plus_one_equal: bool
    support_trace: tuple = field(default=(), repr=False)

    @property
    def certificate(self) -> dict:
        return {"m": self.m, "m_plus_one_equal": self.m_plus_one_equal}

    def to_json(self) -> dict:
        z = self.value.approx()
        return {
            "value": self.value.to_json(),
            "approx": {"re": round(z.real, 12) + 0.0, "im": round(z.imag, 12) + 0.0},
            "certificate": self.certificate,
        }


# -- the engine -------------------------------------------------------------------


def _denominator(a: Fraction) -> int:
    return a.denominator


def _phi_profile(data: SupercuspidalData, g1: Mat2, g2: Mat2, emb: EmbeddingSpec, m: int):
    """Angles of Phi(g2^{-1} emb(t) g1) on the level-m representatives (None off J)."""
    cache = _profile_cache(data)
    key = (g1.key(), g2.key(), emb.key(), m)
    hit = cache.get(key)
    if hit is not None:
        return hit
    tkey = ("torus", emb.key(), m)
    embedded = cache.get(tkey)
    if embedded is None:
        embedded = [emb(t) for t, _ in _torus_representatives(emb.E, m)]
        cache[tkey] = embedded
    g2inv = g2.inverse()
    tt = ThetaTilde(data)
    angles = []
    for et in embedded:
        h = g2inv * et * g1
        dec = decompose_J(h, data)
        angles.append(None if dec is None else tt.angle_of(*dec))
    N = math.lcm(1, *[a.denominator for a in angles if a is not None])
    mask = np.array([a is not None for a in angles], dtype=bool)
    nums = np.array([0 if a is None else int(a * N) for a in angles], dtype=np.int64)
    res = (mask, nums, N)
    cache[key] = res
    return res


_PROFILE_CACHES: dict = {}


def _profile_cache(data: SupercuspidalData) -> dict:
    k = id(data)
    entry = _PROFILE_CACHES.get(k)
    if entry is None or entry[0] is not data:
        entry = (data, {})
        _PROFILE_CACHES[k] = entry
    return entry[1]


def clear_profile_cache() -> None:
    _PROFILE_CACHES.clear()


def _chi_profile(chi: MultChar, E: QuadExtDescriptor, m: int):
    """Angles of chi on the level-m representatives as (nums, N)."""
    if chi.base != E:
        raise ConfigError("chi must be a character of the torus field")
    eps, ys = _torus_points(E, m)
    U = chi.U
    if chi.c == 0:
        unit = np.zeros_like(ys)
    else:
        A, B = U.digits
        PB = E.p**B
        codes = 1 * PB + (ys % PB)
        unit = chi.table[codes]
    N = math.lcm(chi.order, chi.unif.denominator)
    nums = (unit * (N // chi.order) + eps * int(chi.unif * N)) % N
    return nums, N


def _pair_sum(data, chi, g1, g2, emb, m) -> tuple[CycloNumber, np.ndarray]:
    mask, pnums, Np = _phi_profile(data, g1, g2, emb, m)
    cnums, Nc = _chi_profile(chi, emb.E, m)
    N = math.lcm(Np, Nc)
    ang = (pnums * (N // Np) + cnums * (N // Nc)) % N
    counts = np.bincount(ang[mask], minlength=N)
    return CycloNumber.from_histogram(N, counts, Fraction(1, emb.E.p**m)), mask


def required_depth(data: SupercuspidalData, chi: MultChar, g: Mat2, emb: EmbeddingSpec) -> int:
    """A level m beyond which the level-m sum is exact (locally constant integrand)."""
    F = data.F
    E = emb.E
    X0 = emb.M.inverse() * E.sqrtD().embed_matrix() * emb.M if emb.M is not None else E.sqrtD().embed_matrix()
    X = g.inverse() * X0 * g
    c = data.c_theta
    if data.e == 2:
        bounds = (c // 2 + c % 2, c // 2, c // 2 + 1, c // 2 + c % 2)
    else:
        bounds = (c, c, c, c)
    m = 0
    for x, b in zip(X.entries(), bounds):
        if x.val != INF:
            m = max(m, b - x.val)
    return max(m, chi.conductor // 2, 1)


def check_central_character(data: SupercuspidalData, chi: MultChar) -> None:
    cache = _profile_cache(data)
    key = ("central", id(chi))
    hit = cache.get(key)
    if hit is None or hit[0] is not chi:
        w = data.theta.restrict_to_F()
        hit = (chi, (w * chi.restrict_to_F()).is_trivial())
        cache[key] = hit
    if not hit[1]:
        raise IncompatibleCentralCharacter("chi|_F * w_pi is not trivial")


def _pairing_at(data, chi, spec1, spec2, emb, m):
    total = CycloNumber.zero()
    trace = []
    for i, (c1, g1) in enumerate(spec1.terms):
        for j, (c2, g2) in enumerate(spec2.terms):
            val, mask = _pair_sum(data, chi, g1, g2, emb, m)
            if not val.is_zero():
                total = total + c1 * c2.conj() * val
            trace.append((i, j, tuple(int(k) for k in np.flatnonzero(mask))))
    return total, trace


def _scale_root(s: Fraction) -> Fraction:
    num, den = s.numerator, s.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise NotRational(f"sqrt({s}) is not rational")
    return Fraction(rn, rd)


def period_integral(data: SupercuspidalData, chi: MultChar, phi1: TestVectorSpec,
                    phi2: TestVectorSpec, emb: EmbeddingSpec | None = None,
                    m: int | None = None, max_refine: int = DEFAULT_MAX_REFINE) -> IntegralResult:
    """{phi1, phi2} with an m / m+1 stability certificate."""
    emb = emb or EmbeddingSpec(data.L)
    check_central_character(data, chi)
    scale = _scale_root(phi1.scale_sq * phi2.scale_sq)
    if m is None:
        m = max(required_depth(data, chi, g, emb) for _, g in phi1.terms)
    value, trace = _pairing_at(data, chi, phi1, phi2, emb, m)
    for _ in range(max_refine + 1):
        nxt, ntrace = _pairing_at(data, chi, phi1, phi2, emb, m + 1)
        if nxt == value:
            return IntegralResult(value * scale, m, True, tuple(trace))
        value, trace, m = nxt, ntrace, m + 1
    raise UnstableSum(f"period sum not stable up to level {m}")


def period_integral_pointwise(data: SupercuspidalData, chi: MultChar, phi: TestVectorSpec,
                              emb: EmbeddingSpec | None = None, m: int | None = None) -> IntegralResult:
    """{phi, phi} by first forming the integrand (pi(t) phi, phi) chi(t) at each t.

    Independent summation order from :func:`period_integral`; used to check the
    bilinear expansion.
    """
    emb = emb or EmbeddingSpec(data.L)
    check_central_character(data, chi)
    scale = _scale_root(phi.scale_sq * phi.scale_sq)
    if m is None:
        m = max(required_depth(data, chi, g, emb) for _, g in phi.terms)

    def level(mm):
        reps = torus_representatives(emb.E, mm)
        total = CycloNumber.zero()
        tt = ThetaTilde(data)

        invs = [(c2, g2.inverse()) for c2, g2 in phi.terms]
        for t, w in reps:
            T = emb(t)
            integrand = CycloNumber.zero()
            for c1, g1 in phi.terms:
                Tg = T * g1
                for c2, g2inv in invs:
                    dec = decompose_J(g2inv * Tg, data)
                    if dec is not None:
                        integrand = integrand + c1 * c2.conj() * CycloNumber.from_angle(tt.angle_of(*dec))
            if not integrand.is_zero():
                total = total + integrand * chi.value(t) * w
        return total

    a, b = level(m), level(m + 1)
    if a != b:
        raise UnstableSum("pointwise sum not stable")
    return IntegralResult(a * scale, m, True)


# -- the quadratic equation -------------------------------------------------------------


@dataclass(frozen=True)
class SolverResult:
    solutions: tuple  # v mod p^{ceil(n/2)} predicted to give a nonzero period
    congruence_solutions: tuple  # raw sweep of the congruence, projected mod p^{ceil(n/2)}
    modulus_exponent: int  # congruence taken mod p^this
    residue_exponent: int  # solutions reported mod p^this
    discriminant: PAdicScalar
    discriminant_is_square: bool  # square modulo p^{modulus_exponent}
    discriminant_is_square_in_F: bool
    l: int
    coefficients: tuple  # (A, B, C) with A v^2 - B v + C


def _nu(data: SupercuspidalData, chi: MultChar) -> MultChar:
    return data.theta * chi.bar()


def equation_coefficients(data: SupercuspidalData, chi: MultChar, u=0):
    """(A, B, C, l) for A v^2 - B v + C.

    A = D/D' = 1/y^2, B = 2 D^{n+1} b' - 2/y where alpha of theta chi-bar is
    b' sqrt D, and C = 1 - D u^2.  The u-independent part is cached per
    (data, chi).
    """
    F = data.F
    L = data.L
    cache = _profile_cache(data)
    key = ("equation", id(chi))
    hit = cache.get(key)
    if hit is None or hit[0] is not chi:
        nu = _nu(data, chi)
        c_nu = nu.conductor
        if c_nu == 0:
            raise ConfigError("theta chi-bar is unramified; no quadratic equation")
        alpha = alpha_of_char(nu, AdditiveChar(L, data.psi.beta))
        if not alpha.is_pure_imaginary():
            raise ConfigError("alpha of theta chi-bar could not be normalized into F sqrt D")
        bprime = alpha.alpha.b
        A = (data.y * data.y).inverse()
        B = F(2) * L.Dp ** (data.n + 1) * bprime - F(2) / data.y
        hit = (chi, A, B, c_nu // 2)
        cache[key] = hit
    _, A, B, l = hit
    C = F(1) - L.Dp * F(u) * F(u)
    return A, B, C, l


def is_square_in_F(x: PAdicScalar) -> bool:
    if x.is_zero():
        return True
    return x.val % 2 == 0 and legendre(x.unit, x.F.p) == 1


def _root_residues(A, B, disc, k: int) -> set:
    root = padic_sqrt(disc)
    two_a = A.F(2) * A
    out = set()
    for s in (root, -root):
        v = (B + s) / two_a
        if v.val == 0:
            out.add(v.int_mod(k))
    return out


def solve_test_vector_equation(data: SupercuspidalData, chi: MultChar, u=0) -> SolverResult:
    """Residues v mod p^{ceil(n/2)} for the test vector pi(n(u) diag(v, 1)) phi_0.

    The congruence mod p^{n - floor(l/2)} is swept over all unit lifts.  For
    n - l even and u = 0 the reported solutions are the residues of the roots
    of the exact equation, which exist iff the discriminant is a square in F;
    this discards spurious double roots of the congruence when the discriminant
    has odd valuation above n - l.  Otherwise the sweep is reported as is.
    """
    A, B, C, l = equation_coefficients(data, chi, u)
    F = data.F
    p = F.p
    n = data.n
    r = n - l // 2
    k = _ceil_half(n)
    modr = p**r
    Ai, Bi, Ci = (x.int_mod(r) for x in (A, B, C))
    cong = set()
    for v in range(modr):
        if v % p and (Ai * v * v - Bi * v + Ci) % modr == 0:
            cong.add(v % p**k)
    disc = B * B - F(4) * A * C
    in_F = is_square_in_F(disc)
    if (n - l) % 2 == 0 and F(u).is_zero():
        sols = _root_residues(A, B, disc, k) if in_F and not disc.is_zero() else set()
    else:
        sols = cong
    return SolverResult(tuple(sorted(sols)), tuple(sorted(cong)), r, k, disc,
                        is_square_mod(disc, r), in_F, l, (A, B, C))


def exact_solutions(data: SupercuspidalData, chi: MultChar) -> tuple[PAdicScalar, PAdicScalar]:
    """Roots v, v' of A v^2 - B v + 1 = 0 (Hensel square root of the discriminant)."""
    A, B, _, _ = equation_coefficients(data, chi, 0)
    disc = B * B - data.F(4) * A
    root = padic_sqrt(disc)
    two_a = data.F(2) * A
    return (B + root) / two_a, (B - root) / two_a


# -- closed forms and diagnostics --------------------------------------------------------


def diagonal_value(data, chi, v, u=0, emb=None) -> IntegralResult:
    spec = TestVectorSpec.translate(data.F, u, v)
    return period_integral(data, chi, spec, spec, emb)


def minimal_vector_prediction(data: SupercuspidalData, chi: MultChar, v: int, u=0) -> Fraction | None:
    """Predicted I(phi, chi) for phi = pi(n(u) diag(v,1)) phi_0 (None if no claim applies)."""
    nu = _nu(data, chi)
    c = nu.conductor
    q = data.F.p
    if c == 0:
        return None  # the distinguished v is found by the sweep
    l = c // 2
    sol = solve_test_vector_equation(data, chi, u)
    if v % q ** sol.residue_exponent in sol.solutions:
        return Fraction(1, q ** (l // 2))
    return Fraction(0)


def phase_prediction(data: SupercuspidalData, chi: MultChar) -> CycloNumber:
    s = data.L.sqrtD()
    return CycloNumber.from_angle((data.theta.angle(s) + chi.angle(s)) % 1)


@dataclass(frozen=True)
class PhaseFactor:
    direct: CycloNumber
    predicted: CycloNumber

    @property
    def agree(self) -> bool:
        return self.direct == self.predicted


def phase_factor(data: SupercuspidalData, chi: MultChar, v, vprime) -> PhaseFactor:
    """gamma = Phi([[0, 1/v'], [v D, 0]]) chi(sqrt D), compared with theta chi(sqrt D)."""
    F = data.F
    v, vprime = F(v), F(vprime)
    g = Mat2(F.zero(), vprime.inverse(), v * data.L.Dp, F.zero())
    ang = phi_angle(g, data)
    if ang is None:
        raise NotOnSupport("evaluation point is not in J")
    direct = CycloNumber.from_angle((ang + chi.angle(data.L.sqrtD())) % 1)
    return PhaseFactor(direct, phase_prediction(data, chi))


@dataclass(frozen=True)
class SupportReport:
    predicted: frozenset
    scanned: frozenset
    volume: Fraction
    predicted_volume: Fraction
    product_identity: bool  # v v' D = D'
    valuation_gap: int  # v(v/v' - 1)
    m: int

    @property
    def match(self) -> bool:
        return self.predicted == self.scanned


def support_predicate(l: int):
    """t = a + b sqrt D (a class mod F^x) lies on the support iff v(a) - v(b) >= ceil((l+1)/2)."""
    k = _ceil_half(l + 1)

    def pred(t: QuadExtScalar) -> bool:
        if t.b.is_zero():
            return False
        return t.a.val - t.b.val >= k

    return pred


def support_of_integral(data: SupercuspidalData, chi: MultChar, v, vprime, m: int | None = None) -> SupportReport:
    F = data.F
    L = data.L
    v, vprime = F(v), F(vprime)
    nu = _nu(data, chi)
    l = nu.conductor // 2
    k = Mat2(v, F.zero(), F.zero(), F(1))
    kp = Mat2(vprime, F.zero(), F.zero(), F(1))
    emb = EmbeddingSpec(L)
    if m is None:
        m = max(required_depth(data, chi, k, emb), _ceil_half(l + 1)) + 1
    pred = support_predicate(l)
    reps = torus_representatives(L, m)
    mask, _, _ = _phi_profile(data, k, kp, emb, m)
    scanned = frozenset(i for i in range(len(reps)) if mask[i])
    predicted = frozenset(i for i, (t, _) in enumerate(reps) if pred(t))
    w = Fraction(1, F.p**m)
    q = F.p
    gap = (v / vprime - F(1)).val
    return SupportReport(
        predicted, scanned, w * len(scanned), Fraction(1, q ** (l // 2)),
        (v * vprime * L.Dp - data.Dprime).is_zero(), gap, m,
    )


@dataclass(frozen=True)
class CrossTerms:
    diag_x: CycloNumber
    diag_xp: CycloNumber
    off: CycloNumber
    off_rev: CycloNumber

    @property
    def vanishing_ok(self) -> bool:
        """A vanishing diagonal entry kills its row and column."""
        if self.diag_x.is_zero() or self.diag_xp.is_zero():
            return self.off.is_zero() and self.off_rev.is_zero()
        return True

    @property
    def magnitude_ok(self) -> bool:
        """Equal diagonal magnitudes force the same off-diagonal magnitude."""
        a, b = self.diag_x.norm_squared(), self.diag_xp.norm_squared()
        if a != b:
            return True
        return self.off.norm_squared() == a and self.off_rev.norm_squared() == a


def cross_term_structure(data, chi, x, xprime, emb=None) -> CrossTerms:
    F = data.F
    sx = TestVectorSpec.translate(F, 0, x)
    sy = TestVectorSpec.translate(F, 0, xprime)
    I = lambda a, b: period_integral(data, chi, a, b, emb).value  # noqa: E731
    return CrossTerms(I(sx, sx), I(sy, sy), I(sx, sy), I(sy, sx))


def bar_symmetry_check(data: SupercuspidalData, chi: MultChar, spec: TestVectorSpec | None = None) -> bool:
    """I(phi, chi) = I(pi(diag(-1,1)) phi, chi-bar)."""
    F = data.F
    spec = spec or TestVectorSpec.minimal(F)
    flipped = spec.left_translate(Mat2.diag(F, -1))
    a = period_integral(data, chi, spec, spec).value
    b = period_integral(data, chi.bar(), flipped, flipped).value
    return a == b


# -- newform --------------------------------------------------------------------------


@dataclass
class NewformResult:
    direct: IntegralResult
    double_sum: CycloNumber
    diagonal: dict
    off_diagonal: dict
    prediction: CycloNumber | None
    rule: str
    hypothesis_violations: list = field(default_factory=list)
    phase: PhaseFactor | None = None

    @property
    def agrees(self) -> bool:
        if self.direct.value != self.double_sum:
            return False
        return self.prediction is None or self.prediction == self.direct.value


def newform_period(data: SupercuspidalData, chi: MultChar, emb: EmbeddingSpec | None = None) -> NewformResult:
    """Direct period of the translated newform, the expanded double sum, and the closed form."""
    F = data.F
    q = F.p
    emb = emb or EmbeddingSpec(data.L)
    spec = TestVectorSpec.translated_newform(data)
    direct = period_integral(data, chi, spec, spec, emb)
    xs = unit_residues(q, newform_depth(data))
    Nx = len(xs)
    single = {x: TestVectorSpec.translate(F, 0, x) for x in xs}
    diag, off = {}, {}
    for x in xs:
        for xp in xs:
            val = period_integral(data, chi, single[x], single[xp], emb).value
            (diag if x == xp else off)[(x, xp)] = val
    double = (sum(diag.values(), CycloNumber.zero()) + sum(off.values(), CycloNumber.zero())) * Fraction(1, Nx)
    violations = []
    prediction = None
    rule = "none"
    phase = None
    nu = _nu(data, chi)
    c_nu = nu.conductor
    nonzero = [x for x in xs if not diag[(x, x)].is_zero()]
    if data.case != CASE1 or emb.M is not None or emb.E != data.L:
        violations.append(HypothesisViolation("closed forms need Case1 with E = L in the standard embedding"))
    elif c_nu == 0:
        if len(nonzero) == 1:
            rule = "single-term"
            prediction = diag[(nonzero[0], nonzero[0])] * Fraction(1, Nx)
        else:
            rule = "vanishing"
            prediction = CycloNumber.zero()
    else:
        l = c_nu // 2
        if (data.n - l) % 2 == 0:
            sol = solve_test_vector_equation(data, chi, 0)
            if len(sol.solutions) == 0:
                violations.append(HypothesisViolation("no test-vector solutions: epsilon condition fails"))
                rule = "vanishing"
                prediction = CycloNumber.zero()
            else:
                rule = "closed-form"
                s = data.L.sqrtD()
                tc = CycloNumber.from_angle((data.theta.angle(s) + chi.angle(s)) % 1)
                prediction = (CycloNumber.one() + tc) ** 2 * Fraction(1, Nx * q ** (l // 2))
                v, vp = exact_solutions(data, chi)
                phase = phase_factor(data, chi, v, vp)
        else:
            violations.append(HypothesisViolation("n - l odd: no closed form"))
            if len(nonzero) == 1:
                rule = "single-term"
                prediction = diag[(nonzero[0], nonzero[0])] * Fraction(1, Nx)
    return NewformResult(direct, double, diag, off, prediction, rule, violations, phase)
