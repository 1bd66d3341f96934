"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A :class:`CycloNumber` is a vector of rational coefficients on the power
basis ``1, z, ..., z**(phi(N)-1)`` with ``z = exp(2 pi i / N)``; products are
reduced against the N-th cyclotomic polynomial, so equal numbers of the same
order have equal coefficient vectors.  Numbers of different orders are lifted
to the lcm before combining.
"""

from __future__ import annotations

import cmath
import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import Matrix, cyclotomic_poly, totient
from sympy.abc import x as _x

from .errors import NotRational, OrderBudgetExceeded

DEFAULT_ORDER_CAP = 360
_order_cap = [DEFAULT_ORDER_CAP]


def get_order_cap() -> int:
    return _order_cap[0]


@contextlib.contextmanager
def order_cap(cap: int):
    """Temporarily change the largest cyclotomic order allowed."""
    old = _order_cap[0]
    _order_cap[0] = cap
    try:
        yield
    finally:
        _order_cap[0] = old


def _check_order(N: int) -> None:
    if N > _order_cap[0]:
        raise OrderBudgetExceeded(f"cyclotomic order {N} exceeds cap {_order_cap[0]}")


@dataclass(frozen=True, order=True)
class RationalAngle:
    """num/den modulo 1, kept reduced with 0 <= num < den."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(self.num, self.den)
        d = self.den // g
        object.__setattr__(self, "num", (self.num // g) % d)
        object.__setattr__(self, "den", d)

    @classmethod
    def of(cls, x) -> "RationalAngle":
        if isinstance(x, RationalAngle):
            return x
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other) -> "RationalAngle":
        return RationalAngle.of(self.as_fraction() + RationalAngle.of(other).as_fraction())

    __radd__ = __add__

    def __neg__(self) -> "RationalAngle":
        return RationalAngle(-self.num, self.den)

    def __sub__(self, other) -> "RationalAngle":
        return self + (-RationalAngle.of(other))

    def __mul__(self, k: int) -> "RationalAngle":
        return RationalAngle(self.num * k, self.den)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num == 0

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


@lru_cache(maxsize=None)
def _phi(N: int) -> int:
    return int(totient(N))


@lru_cache(maxsize=None)
def _reduction_table(N: int) -> np.ndarray:
    """Row k holds the coefficients of z**k reduced mod Phi_N (integers)."""
    f = _phi(N)
    poly = [int(c) for c in reversed(cyclotomic_poly(N, _x, polys=True).all_coeffs())]
    table = np.zeros((N, f), dtype=object)
    cur = [0] * f
    cur[0] = 1
    for k in range(N):
        table[k] = cur
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            # z**f = -(poly[0] + ... + poly[f-1] z**(f-1))
            nxt = [nxt[i] - top * poly[i] for i in range(f)]
        cur = nxt
    return table


class CycloNumber:
    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Sequence):
        _check_order(N)
        if len(coeffs) != _phi(N):
            raise ValueError("coefficient vector has wrong length")
        self.N = N
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, r, N: int = 1) -> "CycloNumber":
        c = [Fraction(0)] * _phi(N)
        c[0] = Fraction(r)
        return cls(N, c)

    @classmethod
    def zero(cls, N: int = 1) -> "CycloNumber":
        return cls.from_rational(0, N)

    @classmethod
    def one(cls, N: int = 1) -> "CycloNumber":
        return cls.from_rational(1, N)

    @classmethod
    def from_exponent_vector(cls, N: int, vec: Sequence) -> "CycloNumber":
        """sum_k vec[k] * z_N**k for a length-N vector of rationals."""
        _check_order(N)
        table = _reduction_table(N)
        out = [Fraction(0)] * _phi(N)
        for k, c in enumerate(vec):
            if c:
                row = table[k]
                for i in range(len(out)):
                    if row[i]:
                        out[i] += c * row[i]
        return cls(N, out)

    @classmethod
    def from_histogram(cls, N: int, counts, scale=1) -> "CycloNumber":
        """scale * sum_k counts[k] z_N**k for integer counts (numpy friendly)."""
        _check_order(N)
        counts = np.asarray(counts, dtype=object)
        table = _reduction_table(N)
        vec = counts.dot(table) if len(counts) else np.zeros(_phi(N), dtype=object)
        s = Fraction(scale)
        return cls(N, [Fraction(int(v)) * s for v in vec])

    @classmethod
    def from_angle(cls, a) -> "CycloNumber":
        a = RationalAngle.of(a)
        vec = [0] * a.den
        vec[a.num] = 1
        return cls.from_exponent_vector(a.den, vec)

    @classmethod
    def root_of_unity(cls, N: int, k: int = 1) -> "CycloNumber":
        return cls.from_angle(RationalAngle(k, N))

    # -- order handling -----------------------------------------------------

    def lift(self, M: int) -> "CycloNumber":
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot lift order {self.N} to {M}")
        step = M // self.N
        vec = [Fraction(0)] * M
        for i, c in enumerate(self.coeffs):
            vec[i * step] = c
        return CycloNumber.from_exponent_vector(M, vec)

    def _merge(self, other) -> tuple["CycloNumber", "CycloNumber"]:
        if not isinstance(other, CycloNumber):
            other = CycloNumber.from_rational(other, self.N)
        if other.N == self.N:
            return self, other
        M = math.lcm(self.N, other.N)
        _check_order(M)
        return self.lift(M), other.lift(M)

    def exponent_vector(self) -> list[Fraction]:
        vec = [Fraction(0)] * self.N
        for i, c in enumerate(self.coeffs):
            vec[i] = c
        return vec

    def reduce_order(self) -> "CycloNumber":
        """Re-express over the smallest order d | N whose field contains the value."""
        for d in _divisors(self.N):
            if d == self.N:
                break
            lifted = [CycloNumber.root_of_unity(d, j).lift(self.N).coeffs for j in range(_phi(d))]
            A = Matrix([[row[i] for row in lifted] for i in range(_phi(self.N))])
            try:
                sol, params = A.gauss_jordan_solve(Matrix(self.coeffs))
            except ValueError:
                continue
            return CycloNumber(d, [Fraction(int(v.p), int(v.q)) for v in sol])
        return self

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "CycloNumber":
        a, b = self._merge(other)
        return CycloNumber(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(self.N, [-c for c in self.coeffs])

    def __sub__(self, other) -> "CycloNumber":
        a, b = self._merge(other)
        return CycloNumber(a.N, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other) -> "CycloNumber":
        return (-self) + other

    def __mul__(self, other) -> "CycloNumber":
        if not isinstance(other, CycloNumber):
            s = Fraction(other)
            return CycloNumber(self.N, [c * s for c in self.coeffs])
        a, b = self._merge(other)
        N = a.N
        vec = [Fraction(0)] * N
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        vec[(i + j) % N] += x * y
        return CycloNumber.from_exponent_vector(N, vec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CycloNumber":
        if isinstance(other, CycloNumber):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def galois(self, k: int) -> "CycloNumber":
        """Image under the automorphism z -> z**k (k prime to N)."""
        N = self.N
        if math.gcd(k, N) != 1:
            raise ValueError("k must be prime to the order")
        vec = [Fraction(0)] * N
        for i, c in enumerate(self.coeffs):
            vec[(i * k) % N] += c
        return CycloNumber.from_exponent_vector(N, vec)

    def norm(self) -> Fraction:
        """Field norm from Q(zeta_N) to Q."""
        prod = CycloNumber.one(self.N)
        for k in range(1, max(self.N, 2)):
            if math.gcd(k, self.N) == 1:
                prod = prod * self.galois(k)
        return prod.to_rational()

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycloNumber.from_rational(1 / self.coeffs[0], self.N)
        cofactor = CycloNumber.one(self.N)
        for k in range(2, self.N):
            if math.gcd(k, self.N) == 1:
                cofactor = cofactor * self.galois(k)
        return cofactor * (1 / (self * cofactor).to_rational())

    def __pow__(self, n: int) -> "CycloNumber":
        if n < 0:
            return CycloNumber.one(self.N) / (self ** (-n))
        result = CycloNumber.one(self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "CycloNumber":
        N = self.N
        vec = [Fraction(0)] * N
        for i, c in enumerate(self.coeffs):
            vec[(-i) % N] += c
        return CycloNumber.from_exponent_vector(N, vec)

    # -- predicates and conversions -----------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotRational(f"{self!r} is not rational")
        return self.coeffs[0]

    def abs_squared(self) -> Fraction:
        """|x|^2 as a rational; raises NotRational when it lies outside Q."""
        return self.norm_squared().to_rational()

    def norm_squared(self) -> "CycloNumber":
        """|x|^2 = x * conj(x), an element of the real subfield."""
        return self * self.conj()

    def as_root_of_unity(self) -> RationalAngle | None:
        """The angle k/N if self is a root of unity (of order dividing 2N), else None."""
        if self.norm_squared() != 1:
            return None
        M = self.N if self.N % 2 == 0 else 2 * self.N
        for k in range(M):
            if CycloNumber.root_of_unity(M, k) == self:
                return RationalAngle(k, M)
        return None

    def approx(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.N)
        return sum((float(c) * z**i for i, c in enumerate(self.coeffs) if c), 0j)

    def to_json(self) -> dict:
        r = self.reduce_order()
        return {"order": r.N, "coeffs": [str(c) for c in r.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNumber":
        return cls(int(obj["order"]), [Fraction(c) for c in obj["coeffs"]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CycloNumber, int, Fraction)):
            return NotImplemented
        a, b = self._merge(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        r = self.reduce_order()
        return hash((r.N, r.coeffs))

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycloNumber({self.coeffs[0]})"
        terms = [f"{c}*z{self.N}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "CycloNumber(" + " + ".join(terms) + ")"


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cyclo_sum(values: Iterable[CycloNumber]) -> CycloNumber:
    total = CycloNumber.zero()
    for v in values:
        total = total + v
    return total


def sqrt_prime(p: int) -> CycloNumber:
    """sqrt(p) in Q(zeta_{4p}) via the quadratic Gauss sum g = sum (x/p) zeta_p^x.

    g**2 = (-1/p) p, with g = sqrt(p) for p = 1 mod 4 and g = i sqrt(p) otherwise.
    """
    from .padic import legendre

    vec = [0] * p
    for x in range(1, p):
        vec[x] = legendre(x, p)
    g = CycloNumber.from_exponent_vector(p, vec)
    if p % 4 == 1:
        return g
    return g * CycloNumber.root_of_unity(4, 3)
