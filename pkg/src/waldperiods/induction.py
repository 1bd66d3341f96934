"""Supercuspidal data obtained by compact induction from a character theta of L^x.

For theta of conductor c over L with ramification index e, the representation
is induced from J = L^x K_A(n), n = floor(c/2), where A is the hereditary order
normalized by L (Iwahori for e = 2, M_2(O) for e = 1) and K_A(m) = 1 + B^m.
L is embedded through F(sqrt D') with sqrt D' -> [[0, 1], [D', 0]] and D'
chosen so that alpha_theta corresponds to 1/(uniformizer^c sqrt D').
"""

from __future__ import annotations

from functools import cached_property
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .characters import (
    AdditiveChar,
    AlphaElement,
    MultChar,
    alpha_of_char,
    quotient,
    uniformizer_power,
)
from .cyclotomic import CycloNumber
from .errors import ConfigError, OddConductor, UnstableSum, UnsupportedCase
from .padic import (
    INF,
    FieldDescriptor,
    Mat2,
    PAdicScalar,
    QuadExtDescriptor,
    QuadExtScalar,
)

CASE1, CASE2, CASE3 = "Case1", "Case2", "Case3"


def _ceil_half(m: int) -> int:
    return -((-m) // 2)


@dataclass(frozen=True)
class OrderLattice:
    """K_A(m) = 1 + B^m for the standard hereditary order with index e."""

    e: int
    m: int

    def bounds(self) -> tuple[int, int, int, int]:
        m = self.m
        if self.e == 2:
            return (_ceil_half(m), m // 2, m // 2 + 1, _ceil_half(m))
        return (m, m, m, m)

    def in_radical_power(self, X: Mat2) -> bool:
        return all(x.val >= b for x, b in zip(X.entries(), self.bounds()))

    def contains(self, k: Mat2) -> bool:
        one = Mat2.identity(k.F)
        return self.in_radical_power(k - one)


@dataclass(frozen=True)
class SupercuspidalData:
    L: QuadExtDescriptor
    theta: MultChar = field(repr=False)
    psi: AdditiveChar = field(repr=False)
    alpha: AlphaElement | None = field(repr=False)
    y: PAdicScalar | None = field(repr=False)  # sqrt D' = y sqrt D
    Dprime: PAdicScalar | None
    c_theta: int
    n: int
    c_pi: int
    case: str

    @property
    def F(self) -> FieldDescriptor:
        return self.L.F

    @property
    def e(self) -> int:
        return self.L.e

    @cached_property
    def lattice(self) -> OrderLattice:
        return OrderLattice(self.e, self.n)

    def embed(self, x: QuadExtScalar) -> Mat2:
        """Embedding of L (given in sqrt D coordinates) through sqrt D'."""
        z = x.b / self.y
        return Mat2(x.a, z, z * self.Dprime, x.a)

    def sqrtDprime(self) -> QuadExtScalar:
        return QuadExtScalar(self.L, self.F.zero(), self.y)

    @cached_property
    def alpha_matrix(self) -> Mat2:
        return self.embed(self.alpha.alpha)

    @cached_property
    def _shift_cache(self) -> dict:
        return {}

    def shift_pair(self, j: int):
        """(s, embed(s^{-1})) for the norm-valuation-j shift s, or None."""
        cache = self._shift_cache
        if j not in cache:
            s = _shift(self, j)
            cache[j] = None if s is None else (s, self.embed(s.inverse()))
        return cache[j]


def classify(theta: MultChar, psi: AdditiveChar | None = None) -> SupercuspidalData:
    L = theta.base
    if not isinstance(L, QuadExtDescriptor):
        raise ConfigError("theta must be a character of a quadratic extension")
    F = L.F
    psi = psi or AdditiveChar(F)
    if psi.restrict().level != 0:
        raise ConfigError("the construction uses an additive character of level 0")
    c = theta.conductor
    if c < 2:
        raise UnsupportedCase(f"conductor {c} < 2 is outside the implemented range")
    e = L.e
    n = c // 2
    if e == 2:
        if c % 2:
            raise OddConductor("ramified L needs even c(theta)")
        case, c_pi = CASE1, 2 * n + 1
    elif c % 2 == 0:
        case, c_pi = CASE2, 4 * n
    else:
        case, c_pi = CASE3, 4 * n + 2
    if case == CASE3:
        return SupercuspidalData(L, theta, psi, None, None, None, c, n, c_pi, case)
    alpha = alpha_of_char(theta, AdditiveChar(L, psi.beta))
    z = (alpha.alpha * uniformizer_power(L, c)).inverse()
    if not z.a.is_zero():
        raise ConfigError("1/(alpha uniformizer^c) is not in F sqrt D; alpha not normalized")
    y = z.b
    Dprime = y * y * L.Dp
    return SupercuspidalData(L, theta, psi, alpha, y, Dprime, c, n, c_pi, case)


def kirillov_support(data: SupercuspidalData) -> tuple[int, int]:
    """(k, m) such that phi_0 is supported on uniformizer^{-k} U_F(m) in the Kirillov model."""
    n = data.n
    if data.case == CASE1:
        return n, _ceil_half(n)
    if data.case == CASE2:
        return 2 * n, n
    return 2 * n + 1, n + 1


# -- J decomposition --------------------------------------------------------------


def _shift(data: SupercuspidalData, j: int) -> QuadExtScalar | None:
    """Element of L with norm valuation j: p^{j//2} (sqrt D')^{j%2}."""
    L = data.L
    if data.e == 1:
        if j % 2:
            return None
        return L(L.F(L.p) ** (j // 2))
    s = L(L.F(L.p) ** (j // 2))
    return s * data.sqrtDprime() if j % 2 else s


def decompose_J(g: Mat2, data: SupercuspidalData):
    """(l, k) with g = embed(l) k, l in L^x, k in K_A(n); None if g is not in J."""
    if data.case == CASE3:
        raise UnsupportedCase("J decomposition implemented for Case1/Case2 only")
    det = g.det()
    if det.is_zero():
        raise ConfigError("matrix is not invertible")
    pair = data.shift_pair(det.val)
    if pair is None:
        return None
    s, sinv = pair
    h = sinv * g
    x, z = h.a, h.b
    if x.val < 0 or z.val < 0:
        return None
    if data.e == 2:
        if x.val != 0:
            return None
    elif min(x.val, z.val) != 0:
        return None
    b = data.lattice.bounds()
    if (h.c - z * data.Dprime).val < b[2] or (h.d - x).val < b[3]:
        return None
    u = QuadExtScalar(data.L, x, z * data.y)
    k = data.embed(u.inverse()) * h
    return s * u, k


def decompose_J_bruteforce(g: Mat2, data: SupercuspidalData, shuffle_seed: int | None = None):
    """Oracle: sweep representatives of O_L^x / U_L(n) for the decomposition."""
    det = g.det()
    j = det.val
    s = _shift(data, j)
    if s is None:
        return None
    U = quotient(data.L, data.n if data.e == 2 else data.n)
    codes = list(U.codes)
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(codes)
    lat = data.lattice
    for code in codes:
        u = U.representative(code)
        # U_L(n) sits inside K_A(n) for both cases
        l = s * u
        k = data.embed(l.inverse()) * g
        if lat.contains(k):
            return l, k
    return None


# -- theta tilde and the matrix coefficient ---------------------------------------


@dataclass(frozen=True)
class ThetaTilde:
    data: SupercuspidalData

    def angle_of(self, l: QuadExtScalar, k: Mat2) -> Fraction:
        d = self.data
        X = k - Mat2.identity(d.F)
        tr = (d.alpha_matrix * X).trace()
        return (d.theta.angle(l) + d.psi.restrict().angle(tr)) % 1

    def angle(self, g: Mat2) -> Fraction | None:
        dec = decompose_J(g, self.data)
        if dec is None:
            return None
        return self.angle_of(*dec)


def theta_tilde_eval(g: Mat2, data: SupercuspidalData) -> Fraction:
    from .errors import NotOnSupport

    a = ThetaTilde(data).angle(g)
    if a is None:
        raise NotOnSupport("matrix is not in J")
    return a


def matrix_coefficient(g: Mat2, data: SupercuspidalData) -> CycloNumber:
    """Phi_{phi_0}(g): theta-tilde on J, zero elsewhere."""
    if data.case == CASE3:
        raise UnsupportedCase("matrix coefficient needs a one-dimensional Lambda")
    a = ThetaTilde(data).angle(g)
    if a is None:
        return CycloNumber.zero()
    return CycloNumber.from_angle(a)


def phi_angle(g: Mat2, data: SupercuspidalData) -> Fraction | None:
    if data.case == CASE3:
        raise UnsupportedCase("matrix coefficient needs a one-dimensional Lambda")
    return ThetaTilde(data).angle(g)


# -- Whittaker / Kirillov cross-check ------------------------------------------------


@dataclass(frozen=True)
class WhittakerValue:
    value: CycloNumber
    R: int
    cutoff: int


def _whittaker_sum(data: SupercuspidalData, a: PAdicScalar, R: int, cutoff: int) -> CycloNumber:
    F = data.F
    p = F.p
    k = data.c_pi // 2
    pk = F(p) ** k
    top_left = pk * a
    one, zero = F(1), F.zero()
    psiF = data.psi.restrict()
    N_steps = p ** (R + cutoff)
    step = Fraction(1, p**cutoff)
    start = Fraction(1, p**R)
    total = {}
    for i in range(N_steps):
        x = F(start * i) if i else zero
        g = Mat2(top_left, pk * x, zero, one)
        ang = phi_angle(g, data)
        if ang is None:
            continue
        ang = (ang + psiF.angle(-x) if i else ang) % 1
        total[ang] = total.get(ang, 0) + 1
    value = CycloNumber.zero()
    for ang, cnt in sorted(total.items()):
        value = value + CycloNumber.from_angle(ang) * cnt
    return value * step


def whittaker_restriction(data: SupercuspidalData, a, cutoff: int | None = None,
                          R: int | None = None, max_refine: int = 4) -> WhittakerValue:
    """W_{phi_0}(diag(a, 1)) as an exactly certified finite sum.

    The x-integral runs over p^{-R} O modulo p^{cutoff} with weight p^{-cutoff}.
    Both bounds are increased until two consecutive levels agree.
    """
    F = data.F
    a = F(a)
    k = data.c_pi // 2
    va = a.val
    if R is None:
        R = max(0, _ceil_half(k - va) + 1)
    if cutoff is None:
        cutoff = max(1, va + data.c_theta // 2 + 1)
    prev = _whittaker_sum(data, a, R, cutoff)
    for _ in range(max_refine):
        nxt = _whittaker_sum(data, a, R + 1, cutoff + 1)
        if nxt == prev:
            return WhittakerValue(prev, R, cutoff)
        prev, R, cutoff = nxt, R + 1, cutoff + 1
    raise UnstableSum("Whittaker sum did not stabilize")
