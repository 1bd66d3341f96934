"""Additive and multiplicative characters of Q_p and its quadratic extensions.

Multiplicative characters are stored as integer tables: ``table[code]`` is the
numerator of the angle (denominator ``order``) on the unit class with the given
:class:`~waldperiods.padic.UnitQuotient` code, plus the angle at the fixed
uniformizer (sqrt D for ramified E, p otherwise).
"""

from __future__ import annotations

import io
import json
import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import Matrix
from sympy.ntheory import primitive_root
from sympy.matrices.normalforms import smith_normal_decomp

from .cyclotomic import CycloNumber, RationalAngle, sqrt_prime
from .errors import (
    ConfigError,
    InconsistentTable,
    NoSolution,
    OddConductor,
)
from .padic import (
    INF,
    FieldDescriptor,
    PAdicScalar,
    QuadExtDescriptor,
    QuadExtScalar,
    UnitQuotient,
    hilbert_symbol,
    legendre,
)

CACHE_MAGIC = "WALDPERIODS-CHARTABLE"
CACHE_VERSION = 1


def _frac_mod1(x) -> Fraction:
    f = Fraction(x)
    return f - math.floor(f)


# -- helpers on the base field ------------------------------------------------


def _is_ext(base) -> bool:
    return isinstance(base, QuadExtDescriptor)


def _F(base) -> FieldDescriptor:
    return base.F if _is_ext(base) else base


def element(base, x):
    """Coerce a rational / scalar into an element of ``base``."""
    if _is_ext(base):
        return x if isinstance(x, QuadExtScalar) else base(x)
    return x if isinstance(x, PAdicScalar) else base(x)


def unit_decomposition(base, x) -> tuple[int, object]:
    """(k, u) with x = uniformizer**k * u and u a unit."""
    x = element(base, x)
    if _is_ext(base):
        return x.unit_part()
    if x.is_zero():
        raise ZeroDivisionError("zero has no unit part")
    return x.val, PAdicScalar(x.F, 0, x.unit, x.prec - x.val)


def uniformizer_power(base, k: int):
    if _is_ext(base):
        if base.ramified:
            s = base(base.F(base.D) ** (k // 2))
            return s * base.sqrtD() if k % 2 else s
        return base(base.F(base.p) ** k)
    return base(base.p) ** k


def residues(base, k: int) -> list:
    """All elements of O / uniformizer**k (canonical digit representatives)."""
    p = base.p
    if k <= 0:
        return [element(base, 0)]
    if _is_ext(base):
        if base.ramified:
            A, B = (k + 1) // 2, k // 2
        else:
            A = B = k
        return [base(a, b) for a in range(p**A) for b in range(p**B)]
    return [base(a) for a in range(p**k)]


def group_generators(U: UnitQuotient) -> list[int]:
    """A small generating set of the unit quotient (as codes)."""
    if U.c == 0:
        return []
    base = U.base
    p = U.p
    gens = []
    if _is_ext(base) and not base.ramified:
        # generator of F_{p^2}^x
        target = p * p - 1
        for a in range(p):
            for b in range(1, p):
                x = base(a, b)
                code = UnitQuotient(base, 1).code_of(x)
                if _order_in(UnitQuotient(base, 1), code) == target:
                    gens.append(U.code_of(x))
                    break
            if gens:
                break
        for k in range(1, U.c):
            gens.append(U.code_of(base(1 + p**k)))
            gens.append(U.code_of(base(1, p**k)))
        return gens
    g = primitive_root(p)
    gens.append(U.code_of(element(base, g)))
    for k in range(1, U.c):
        gens.append(U.code_of(1 + uniformizer_power(base, k)) if _is_ext(base) else U.code_of(base(1 + p**k)))
    return gens


def _order_in(U: UnitQuotient, code: int) -> int:
    one = U.identity()
    x, k = code, 1
    while x != one:
        x = U.mul(x, code)
        k += 1
    return k


@dataclass(frozen=True)
class _QuotientData:
    levels: np.ndarray  # level_of per code (-1 for non-units)
    unit_mask: np.ndarray


def _quotient_data(U: UnitQuotient) -> _QuotientData:
    key = (U.base, U.c)
    if key not in _QD_CACHE:
        levels = np.full(U.code_range, -1, dtype=np.int64)
        mask = np.zeros(U.code_range, dtype=bool)
        for code in U.codes:
            levels[code] = U.level_of(code)
            mask[code] = True
        _QD_CACHE[key] = _QuotientData(levels, mask)
    return _QD_CACHE[key]


_QD_CACHE: dict = {}
_UQ_CACHE: dict = {}


def quotient(base, c: int) -> UnitQuotient:
    key = (base, c)
    if key not in _UQ_CACHE:
        _UQ_CACHE[key] = UnitQuotient(base, c)
    return _UQ_CACHE[key]


def projection(base, c_from: int, c_to: int) -> np.ndarray:
    """Array mapping codes at level c_from to codes at level c_to <= c_from."""
    key = ("proj", base, c_from, c_to)
    if key not in _UQ_CACHE:
        Uf, Ut = quotient(base, c_from), quotient(base, c_to)
        arr = np.zeros(Uf.code_range, dtype=np.int64)
        for code in Uf.codes:
            a, b = Uf.split(code)
            arr[code] = Ut.join(a, b) if c_to else 0
        _UQ_CACHE[key] = arr
    return _UQ_CACHE[key]


# -- additive characters ------------------------------------------------------


@dataclass(frozen=True)
class AdditiveChar:
    """x -> psi_F(beta * Tr x), with psi_F(x) = exp(-2 pi i {x}_p) of level 0."""

    base: object
    beta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.beta == 0:
            raise ConfigError("beta must be nonzero")

    @property
    def F(self) -> FieldDescriptor:
        return _F(self.base)

    @property
    def level(self) -> int:
        vb = self.F(self.beta).val
        if _is_ext(self.base):
            e = self.base.e
            return 1 - e - e * vb
        return -vb

    def restrict(self) -> "AdditiveChar":
        """The underlying character of F (forgetting the trace)."""
        return AdditiveChar(self.F, self.beta)

    def extend(self, E: QuadExtDescriptor) -> "AdditiveChar":
        return AdditiveChar(E, self.beta)

    def angle(self, x) -> Fraction:
        if _is_ext(self.base):
            x = element(self.base, x).trace()
        else:
            x = element(self.base, x)
        y = x * self.F(self.beta)
        return _frac_mod1(-y.frac())

    def __call__(self, x) -> RationalAngle:
        return RationalAngle.of(self.angle(x))


# -- multiplicative characters --------------------------------------------------


@lru_cache(maxsize=None)
def _conj_index(U: UnitQuotient) -> np.ndarray:
    conj = np.zeros(U.code_range, dtype=np.int64)
    for code in U.codes:
        conj[code] = U.conj(code)
    conj.setflags(write=False)
    return conj


@lru_cache(maxsize=None)
def _restriction_index(U: UnitQuotient, UF: UnitQuotient) -> np.ndarray:
    """Index array sending a code of O_F^x / U_F to the code of its image in U."""
    idx = np.zeros(UF.code_range, dtype=np.int64)
    for code in UF.codes:
        idx[code] = U.code_of(U.base(UF.representative(code)))
    idx.setflags(write=False)
    return idx


class MultChar:
    """A character of E^x (or F^x) trivial on U(c), as an angle table."""

    def __init__(self, base, c: int, order: int, table: np.ndarray, unif):
        self.base = base
        self.c = c
        self.order = order
        self.table = np.asarray(table, dtype=np.int64) % order
        self.unif = _frac_mod1(unif)
        self.table.setflags(write=False)

    # construction ------------------------------------------------------------

    @classmethod
    def trivial(cls, base, c: int = 0) -> "MultChar":
        U = quotient(base, c)
        return cls(base, c, 1, np.zeros(U.code_range, dtype=np.int64), 0)

    @classmethod
    def from_generators(cls, base, c: int, gens: Sequence, values: Sequence, unif=0) -> "MultChar":
        """Extend generator values to the full quotient, checking consistency.

        Raises InconsistentTable if the values do not define a homomorphism
        or the generators do not generate O^x / U(c).
        """
        U = quotient(base, c)
        gcodes = [U.code_of(element(base, g)) for g in gens]
        angles = [_frac_mod1(v) for v in values]
        N = math.lcm(1, *[a.denominator for a in angles])
        nums = [int(a * N) for a in angles]
        table = np.full(U.code_range, -1, dtype=np.int64)
        one = U.identity()
        table[one] = 0
        queue = deque([one])
        while queue:
            x = queue.popleft()
            for g, v in zip(gcodes, nums):
                y = U.mul(x, g)
                val = (table[x] + v) % N
                if table[y] < 0:
                    table[y] = val
                    queue.append(y)
                elif table[y] != val:
                    raise InconsistentTable(
                        f"generator values do not extend to a character (clash at code {y})"
                    )
        missing = [code for code in U.codes if table[code] < 0]
        if missing:
            raise InconsistentTable(f"generators miss {len(missing)} classes")
        table[table < 0] = 0
        return cls(base, c, N, table, unif).reduced()

    @classmethod
    def from_function(cls, base, c: int, f, unif=0) -> "MultChar":
        """Table from a callable code -> angle (no consistency check)."""
        U = quotient(base, c)
        vals = {code: _frac_mod1(f(code)) for code in U.codes}
        N = math.lcm(1, *[v.denominator for v in vals.values()])
        table = np.zeros(U.code_range, dtype=np.int64)
        for code, v in vals.items():
            table[code] = int(v * N)
        return cls(base, c, N, table, unif)

    # evaluation --------------------------------------------------------------

    @property
    def U(self) -> UnitQuotient:
        return quotient(self.base, self.c)

    def unit_angle(self, code: int) -> Fraction:
        return Fraction(int(self.table[code]), self.order)

    def angle(self, x) -> Fraction:
        k, u = unit_decomposition(self.base, x)
        return _frac_mod1(k * self.unif + self.unit_angle(self.U.code_of(u)))

    def __call__(self, x) -> RationalAngle:
        return RationalAngle.of(self.angle(x))

    def value(self, x) -> CycloNumber:
        return CycloNumber.from_angle(self.angle(x))

    # structure -------------------------------------------------------------------

    def reduced(self) -> "MultChar":
        g = math.gcd(self.order, *[int(v) for v in np.unique(self.table)])
        if g <= 1:
            return self
        return MultChar(self.base, self.c, self.order // g, self.table // g, self.unif)

    def at_level(self, c: int) -> "MultChar":
        if c == self.c:
            return self
        if c < self.c:
            if self.conductor > c:
                raise ValueError(f"cannot lower table level below conductor {self.conductor}")
            U = quotient(self.base, c)
            proj = projection(self.base, self.c, c)
            table = np.zeros(U.code_range, dtype=np.int64)
            for code in self.U.codes:
                table[proj[code]] = self.table[code]
            return MultChar(self.base, c, self.order, table, self.unif)
        proj = projection(self.base, c, self.c)
        return MultChar(self.base, c, self.order, self.table[proj], self.unif)

    @cached_property
    def conductor(self) -> int:
        qd = _quotient_data(self.U)
        nz = qd.unit_mask & (self.table != 0)
        if not nz.any():
            return 0
        return int(qd.levels[nz].max()) + 1

    def _aligned(self, other: "MultChar") -> tuple["MultChar", "MultChar", int]:
        if other.base != self.base:
            raise ConfigError("characters live on different fields")
        c = max(self.c, other.c)
        a, b = self.at_level(c), other.at_level(c)
        return a, b, math.lcm(a.order, b.order)

    def __mul__(self, other: "MultChar") -> "MultChar":
        a, b, N = self._aligned(other)
        t = a.table * (N // a.order) + b.table * (N // b.order)
        return MultChar(self.base, a.c, N, t, a.unif + b.unif).reduced()

    def with_unif(self, unif) -> "MultChar":
        return MultChar(self.base, self.c, self.order, self.table, unif)

    def inverse(self) -> "MultChar":
        return MultChar(self.base, self.c, self.order, -self.table, -self.unif)

    def __truediv__(self, other: "MultChar") -> "MultChar":
        return self * other.inverse()

    def __pow__(self, k: int) -> "MultChar":
        return MultChar(self.base, self.c, self.order, self.table * k, self.unif * k).reduced()

    def bar(self) -> "MultChar":
        """x -> chi(conj x)."""
        if not _is_ext(self.base):
            return self
        U = self.U
        conj = _conj_index(U)
        unif = self.unif
        if self.base.ramified:
            # conj(sqrt D) = -sqrt D
            unif = unif + self.unit_angle(U.code_of(self.base(-1)))
        return MultChar(self.base, self.c, self.order, self.table[conj], unif)

    def restrict_to_F(self) -> "MultChar":
        if not _is_ext(self.base):
            return self
        F = self.base.F
        cF = (self.c + self.base.e - 1) // self.base.e
        UF = quotient(F, cF)
        table = self.table[_restriction_index(self.U, UF)]
        unif = self.angle(self.base(F.p))
        return MultChar(F, cF, self.order, table, unif)

    def is_trivial(self) -> bool:
        return self.unif == 0 and not self.table[_quotient_data(self.U).unit_mask].any()

    def trivial_on_F(self) -> bool:
        return self.restrict_to_F().is_trivial()

    def parity(self) -> Fraction:
        """Angle at -1 (0 or 1/2)."""
        return self.angle(-1)

    def is_homomorphism(self) -> bool:
        """Exhaustive check of chi(xy) = chi(x) + chi(y) on the table."""
        U = self.U
        codes = U.codes
        t = self.table
        N = self.order
        for x in codes:
            tx = t[x]
            for y in codes:
                if (tx + t[y] - t[U.mul(x, y)]) % N:
                    return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultChar):
            return NotImplemented
        if other.base != self.base:
            return False
        d = self / other
        return d.is_trivial()

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"MultChar(base={_describe(self.base)}, c={self.c}, conductor={self.conductor},"
            f" order={self.order}, unif={self.unif})"
        )

    # serialization ---------------------------------------------------------

    def header(self) -> dict:
        return {
            "p": self.base.p,
            "field": _describe(self.base),
            "c": self.c,
            "order": self.order,
            "unif": str(self.unif),
        }

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write(f"{CACHE_MAGIC}\nversion {CACHE_VERSION}\n")
        buf.write(json.dumps(self.header(), sort_keys=True) + "\n")
        for idx, code in enumerate(self.U.codes):
            buf.write(f"{idx} {RationalAngle(int(self.table[code]), self.order)}\n")
        return buf.getvalue()

    @classmethod
    def loads(cls, text: str, base=None) -> "MultChar":
        lines = text.splitlines()
        if not lines or lines[0] != CACHE_MAGIC:
            raise ConfigError("not a character table file")
        if lines[1] != f"version {CACHE_VERSION}":
            raise ConfigError(f"unsupported cache version: {lines[1]!r}")
        head = json.loads(lines[2])
        if base is None:
            base = _field_from_description(head["p"], head["field"])
        elif _describe(base) != head["field"]:
            raise ConfigError("cached table belongs to a different field")
        c, N = head["c"], head["order"]
        U = quotient(base, c)
        table = np.zeros(U.code_range, dtype=np.int64)
        for line in lines[3:]:
            idx, ang = line.split()
            a = Fraction(ang)
            table[U.codes[int(idx)]] = int(a * N)
        return cls(base, c, N, table, Fraction(head["unif"]))


def _describe(base) -> dict:
    if _is_ext(base):
        return {"type": "quadratic", "D": str(base.D)}
    return {"type": "base"}


def _field_from_description(p: int, desc: dict, K: int = 14):
    F = FieldDescriptor(p, K)
    if desc["type"] == "quadratic":
        return QuadExtDescriptor(F, Fraction(desc["D"]))
    return F


def save_char(path: str, chi: MultChar) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(chi.dumps())
    os.replace(tmp, path)


def load_char(path: str, base=None) -> MultChar:
    with open(path) as fh:
        return MultChar.loads(fh.read(), base)


def conductor(chi: MultChar) -> int:
    return chi.conductor


# -- alpha ---------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaElement:
    """alpha with nu(1+u) = psi(alpha u) for v(u) >= ceil(c/2).

    ``alpha`` is determined modulo uniformizer**ambiguity; ``count`` is the
    number of residue classes found (always 1 for a genuine character).
    """

    alpha: object
    char: MultChar = field(repr=False)
    psi: AdditiveChar = field(repr=False)
    ambiguity: int
    count: int = 1

    @property
    def valuation(self) -> int:
        a = self.alpha
        return a.valuation() if isinstance(a, QuadExtScalar) else a.val

    def is_pure_imaginary(self) -> bool:
        """alpha in F * sqrt D (only meaningful for quadratic bases)."""
        a = self.alpha
        if not isinstance(a, QuadExtScalar):
            return False
        return a.a.is_zero()

    def sqrtD_coefficient(self) -> PAdicScalar:
        return self.alpha.b

    def same_class(self, other) -> bool:
        d = element(self.char.base, other) - self.alpha
        if d.is_zero():
            return True
        v = d.valuation() if isinstance(d, QuadExtScalar) else d.val
        return v >= self.ambiguity


def _half_domain(base, c: int) -> list:
    """Representatives of uniformizer**ceil(c/2) O modulo uniformizer**c."""
    h = (c + 1) // 2
    s = uniformizer_power(base, h)
    return [s * r for r in residues(base, c - h)]


def check_alpha(nu: MultChar, psi: AdditiveChar, alpha) -> bool:
    """Exhaustive check of nu(1+u) = psi(alpha u) on the half-level domain."""
    c = nu.conductor
    base = nu.base
    alpha = element(base, alpha)
    for u in _half_domain(base, c):
        if nu.angle(1 + u) != psi.angle(alpha * u):
            return False
    return True


def alpha_of_char(nu: MultChar, psi: AdditiveChar, prefer_pure_imaginary: bool = True) -> AlphaElement:
    """Exhaustive search for alpha_nu among classes of the prescribed valuation.

    With ``prefer_pure_imaginary`` (quadratic ramified base) an alpha in
    F*sqrt D is returned whenever the residue class contains one.
    """
    c = nu.conductor
    if c < 2:
        raise ConfigError("alpha is only defined for conductor >= 2")
    base = nu.base
    if psi.base != base:
        psi = AdditiveChar(base, psi.beta)
    k0 = -c + psi.level
    s = uniformizer_power(base, k0)
    half = c // 2
    UQ = quotient(base, half)
    domain = _half_domain(base, c)
    targets = [nu.angle(1 + u) for u in domain]
    found = []
    for code in UQ.codes:
        w = UQ.representative(code)
        alpha = s * w
        if all(psi.angle(alpha * u) == t for u, t in zip(domain, targets)):
            found.append(alpha)
    if not found:
        raise NoSolution("no alpha satisfies the defining identity")
    amb = k0 + half
    choice = found[0]
    if prefer_pure_imaginary and _is_ext(base) and base.ramified:
        for alpha in found:
            pure = _pure_imaginary_in_class(alpha, amb)
            if pure is not None:
                choice = pure
                break
    return AlphaElement(choice, nu, psi, amb, len(found))


def _pure_imaginary_in_class(alpha: QuadExtScalar, amb: int):
    """b sqrt D congruent to alpha modulo uniformizer**amb, if one exists."""
    # alpha - b sqrt D = a: need v_E(a) = 2 v_F(a) >= amb
    a = alpha.a
    if a.is_zero() or 2 * a.val >= amb:
        return QuadExtScalar(alpha.E, alpha.E.F.zero(), alpha.b)
    return None


# -- eta, lambda, Delta --------------------------------------------------------


def eta(E: QuadExtDescriptor, x) -> int:
    return E.eta(E.F(x))


def gauss_sum(E: QuadExtDescriptor, psi: AdditiveChar) -> CycloNumber:
    """tau(eta, psi) = sum over residue units x of eta(x) psi(x), psi of level 1."""
    psiF = psi.restrict()
    if psiF.level != 1:
        raise ConfigError("Gauss sum needs an additive character of level 1")
    p = E.p
    vec = [Fraction(0)] * p
    for x in range(1, p):
        ang = psiF.angle(x)
        vec[int(ang * p) % p] += eta(E, x)
    return CycloNumber.from_exponent_vector(p, vec)


def lambda_function(E: QuadExtDescriptor, psi: AdditiveChar) -> CycloNumber:
    """Langlands' lambda constant lambda_{E/F}(psi) as an exact root of unity."""
    psiF = psi.restrict()
    if not E.ramified:
        return CycloNumber.from_rational((-1) ** (psiF.level % 2))
    p = E.p
    if psiF.level == 1:
        return gauss_sum(E, psiF) * sqrt_prime(p) * Fraction(1, p)
    # lambda(psi_beta) = eta(beta) lambda(psi), reduced to the level-one character x -> psi_F(x/p)
    ref = AdditiveChar(E.F, Fraction(1, p))
    beta_ratio = psiF.beta * p
    return lambda_function(E, ref) * eta(E, beta_ratio)


def _root_angle(z: CycloNumber) -> Fraction:
    a = z.as_root_of_unity()
    if a is None:
        raise ConfigError("expected a root of unity")
    return a.as_fraction()


def delta_theta(theta: MultChar, psi: AdditiveChar, alpha: AlphaElement | None = None,
                uniformizer_unit=1) -> MultChar:
    """The level <= 1 character Delta_theta attached to theta over L.

    In the ramified case the uniformizer may be changed to ``u * sqrt D`` for
    a unit ``u`` of F (``uniformizer_unit``); the returned character does not
    depend on that choice.
    """
    L = theta.base
    if not _is_ext(L):
        raise ConfigError("theta must live on a quadratic extension")
    if not L.ramified:
        return MultChar(L, 0, 2, np.zeros(1, dtype=np.int64), Fraction(1, 2))
    c = theta.conductor
    if c == 0 or c % 2:
        raise OddConductor(f"ramified case needs positive even conductor, got {c}")
    if alpha is None:
        alpha = alpha_of_char(theta, psi)
    psiF = AdditiveChar(L.F, psi.beta)
    u = L.F(uniformizer_unit)
    if u.val != 0:
        raise ConfigError("uniformizer_unit must be a unit of F")
    w = L.sqrtD() * u
    x = w ** (c - 1) * alpha.alpha
    if not x.b.is_zero():
        raise ConfigError("uniformizer**(c-1) * alpha is not in F; alpha must be pure imaginary")
    lam = _root_angle(lambda_function(L, psiF))
    at_w = Fraction(0 if eta(L, x.a) == 1 else 1, 2) + (c - 1) * lam
    p = L.p
    U1 = quotient(L, 1)
    table = np.zeros(U1.code_range, dtype=np.int64)
    for code in U1.codes:
        a, _ = U1.split(code)
        table[code] = 0 if legendre(a, p) == 1 else 1
    # value at w = u * sqrt D  ->  value at sqrt D
    leg_u = Fraction(0 if legendre(u.unit, p) == 1 else 1, 2)
    return MultChar(L, 1, 2, table, 0).with_unif(at_w - leg_u)


def langlands_twist(Theta: MultChar, psi: AdditiveChar) -> tuple[MultChar, MultChar, AlphaElement]:
    """theta = Theta * Delta_Theta; returns (theta, Delta, alpha_Theta)."""
    alpha = alpha_of_char(Theta, psi)
    delta = delta_theta(Theta, psi, alpha)
    return Theta * delta, delta, alpha


# -- enumeration ----------------------------------------------------------------


def _hnf_insert(basis: dict, row: list[int], modulus: int) -> None:
    r = len(row)
    row = [v % modulus for v in row]
    for col in range(r):
        if row[col] == 0:
            continue
        if col not in basis:
            basis[col] = row
            return
        b = basis[col]
        g, s, t = _egcd(b[col], row[col])
        new_b = [(s * x + t * y) for x, y in zip(b, row)]
        rb, rr = b[col] // g, row[col] // g
        row = [(rb * y - rr * x) % modulus for x, y in zip(b, row)]
        new_b = [new_b[i] if i == col else new_b[i] % modulus for i in range(r)]
        basis[col] = new_b
    return


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def character_group(U: UnitQuotient):
    """Exponent coordinates and Smith invariants of the unit quotient.

    Returns (codes, W, d): W[i] are coordinates of codes[i] such that every
    character is k -> sum_j k_j W[i, j] / d[j] (mod 1).
    """
    key = ("chargroup", U.base, U.c)
    if key in _UQ_CACHE:
        return _UQ_CACHE[key]
    gens = group_generators(U)
    r = len(gens)
    n = len(U)
    if r == 0:
        res = (list(U.codes), np.zeros((1, 0), dtype=np.int64), [])
        _UQ_CACHE[key] = res
        return res
    expo = {U.identity(): [0] * r}
    basis: dict = {}
    for j in range(r):
        basis[j] = [n if i == j else 0 for i in range(r)]
    queue = deque([U.identity()])
    while queue:
        x = queue.popleft()
        ex = expo[x]
        for j, g in enumerate(gens):
            y = U.mul(x, g)
            ey = list(ex)
            ey[j] += 1
            if y not in expo:
                expo[y] = ey
                queue.append(y)
            else:
                rel = [a - b for a, b in zip(ey, expo[y])]
                if any(v % n for v in rel):
                    _hnf_insert(basis, rel, n)
    if len(expo) != n:
        raise InconsistentTable("generating set does not generate the unit quotient")
    R = Matrix([basis[j] for j in range(r)])
    if abs(R.det()) != n:
        raise InconsistentTable("relation lattice has wrong index")
    S, _, V = smith_normal_decomp(R)
    d = [int(S[j, j]) for j in range(r)]
    codes = list(U.codes)
    E = np.array([expo[c] for c in codes], dtype=object)
    Vn = np.array(V.tolist(), dtype=object)
    W = E.dot(Vn)
    keep = [j for j in range(r) if abs(d[j]) > 1]
    d = [abs(d[j]) for j in keep]
    W = np.array([[int(W[i, j]) % d[jj] for jj, j in enumerate(keep)] for i in range(n)], dtype=np.int64).reshape(n, len(keep))
    res = (codes, W, d)
    _UQ_CACHE[key] = res
    return res


def enumerate_characters(base, c: int, trivial_on_F: bool = False, parity=None,
                         uniformizer_values: Iterable | None = None,
                         budget: int = 100_000) -> list[MultChar]:
    """All characters of base^x trivial on U(c) satisfying the constraints.

    Without ``trivial_on_F`` only the uniformizer values listed (default 0)
    are produced; with it the uniformizer value is forced by the constraint.
    """
    from .errors import BudgetExceeded

    U = quotient(base, c)
    codes, W, d = character_group(U)
    total = int(np.prod(d)) if d else 1
    if total > budget:
        raise BudgetExceeded(f"{total} characters exceed budget {budget}")
    N = math.lcm(1, *d)
    # all tuples k
    grids = np.indices(d).reshape(len(d), -1).T if d else np.zeros((1, 0), dtype=np.int64)
    scale = np.array([N // dj for dj in d], dtype=np.int64)
    tables = (grids * scale) @ W.T % N if d else np.zeros((1, len(codes)), dtype=np.int64)
    codes_arr = np.array(codes, dtype=np.int64)
    p = base.p
    if trivial_on_F and _is_ext(base):
        cF = (c + base.e - 1) // base.e
        fgens = [primitive_root(p)] + [1 + p**k for k in range(1, cF)]
        fcodes = [U.code_of(base(g)) for g in fgens]
        idx = [codes.index(fc) for fc in fcodes]
        ok = np.all(tables[:, idx] == 0, axis=1) if idx else np.ones(len(tables), dtype=bool)
        tables = tables[ok]
    out = []
    minus_one = codes.index(U.code_of(element(base, -1))) if c else None
    for row in tables:
        full = np.zeros(U.code_range, dtype=np.int64)
        full[codes_arr] = row
        if parity is not None and c:
            if Fraction(int(row[minus_one]), N) != Fraction(parity):
                continue
        if trivial_on_F and _is_ext(base):
            proto = MultChar(base, c, N, full, 0)
            # chi(p) = 2 chi(sqrt D) - chi(xi) must vanish (ramified) / chi(p) = unif (unramified)
            if base.ramified:
                xi_ang = proto.angle(base(base.xi))
                units = [xi_ang / 2, xi_ang / 2 + Fraction(1, 2)]
            else:
                units = [Fraction(0)]
            for uv in units:
                out.append(MultChar(base, c, N, full, uv).reduced())
        else:
            for uv in (uniformizer_values if uniformizer_values is not None else [0]):
                out.append(MultChar(base, c, N, full, uv).reduced())
    return out
