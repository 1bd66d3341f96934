"""Truncated p-adic arithmetic for F = Q_p and quadratic extensions F(sqrt D).

A :class:`PAdicScalar` stores ``p**val * unit`` together with the absolute
precision ``prec``: the value is known modulo ``p**prec``.  The unit is kept
reduced modulo ``p**(prec - val)``.  Zero has ``val = inf``; an exact zero also
has ``prec = inf``.
"""

from __future__ import annotations

import math
from functools import cached_property
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from sympy.ntheory import sqrt_mod

from .errors import (
    BudgetExceeded,
    ConfigError,
    InverseOfZero,
    NotASquare,
    PrecisionLoss,
)

INF = math.inf
DEFAULT_TABLE_BUDGET = 200_000


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def vp_int(n: int, p: int) -> int:
    if n == 0:
        return INF
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class FieldDescriptor:
    """The base field F = Q_p at working relative precision ``K``."""

    p: int
    K: int = 14
    max_conductor: int | None = None

    def __post_init__(self):
        if self.p == 2 or not _is_prime(self.p):
            raise ConfigError(f"p must be an odd prime, got {self.p}")
        if self.K < 1:
            raise ConfigError("precision K must be positive")
        if self.max_conductor is not None and self.K < 2 * self.max_conductor + 4:
            raise ConfigError(
                f"precision K={self.K} too small for conductor {self.max_conductor}"
                f" (need K >= {2 * self.max_conductor + 4})"
            )

    @property
    def q(self) -> int:
        return self.p

    def __call__(self, x, rel: int | None = None) -> "PAdicScalar":
        if isinstance(x, PAdicScalar):
            return x
        return PAdicScalar.from_rational(self, Fraction(x), self.K if rel is None else rel)

    def zero(self, prec=INF) -> "PAdicScalar":
        return PAdicScalar(self, INF, 0, prec)

    def one(self) -> "PAdicScalar":
        return self(1)

    def uniformizer(self) -> "PAdicScalar":
        return self(self.p)

    def with_precision(self, K: int) -> "FieldDescriptor":
        return FieldDescriptor(self.p, K, self.max_conductor)


class PAdicScalar:
    __slots__ = ("F", "val", "unit", "prec")

    def __init__(self, F: FieldDescriptor, val, unit: int, prec):
        self.F = F
        self.val = val
        self.unit = unit
        self.prec = prec

    @classmethod
    def from_rational(cls, F: FieldDescriptor, x: Fraction, rel: int) -> "PAdicScalar":
        if x == 0:
            return cls(F, INF, 0, INF)
        p = F.p
        num, den = x.numerator, x.denominator
        a = vp_int(num, p)
        b = vp_int(den, p)
        num //= p**a
        den //= p**b
        mod = p**rel
        unit = num * pow(den, -1, mod) % mod
        v = a - b
        return cls(F, v, unit, v + rel)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.val == INF

    @property
    def relprec(self):
        return self.prec - self.val

    def valuation(self):
        return self.val

    def to_fraction(self) -> Fraction:
        """Rational representative ``p**val * u`` with u the balanced unit digits."""
        if self.val == INF:
            return Fraction(0)
        mod = self.F.p ** (self.prec - self.val)
        u = self.unit if 2 * self.unit <= mod else self.unit - mod
        return Fraction(u) * Fraction(self.F.p) ** self.val

    def int_mod(self, k: int) -> int:
        """Residue modulo ``p**k`` of an integral element."""
        if k <= 0:
            return 0
        if self.prec < k:
            raise PrecisionLoss(f"need absolute precision {k}, have {self.prec}")
        if self.val == INF or self.val >= k:
            return 0
        if self.val < 0:
            raise ValueError("int_mod of a non-integral element")
        return self.unit * self.F.p**self.val % self.F.p**k

    def frac(self) -> Fraction:
        """p-adic fractional part in [0, 1)."""
        if self.val == INF or self.val >= 0:
            return Fraction(0)
        if self.prec < 0:
            raise PrecisionLoss("fractional part not resolved at current precision")
        m = self.F.p ** (-self.val)
        return Fraction(self.unit % m, m)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "PAdicScalar":
        if type(other) is PAdicScalar and other.F is self.F:
            return other
        if isinstance(other, PAdicScalar):
            if other.F.p != self.F.p:
                raise ValueError("mixing different primes")
            return other
        rel = self.F.K if self.val == INF else max(self.F.K, self.prec - self.val)
        return PAdicScalar.from_rational(self.F, Fraction(other), rel)

    def __add__(self, other) -> "PAdicScalar":
        other = self._coerce(other)
        F = self.F
        prec = min(self.prec, other.prec)
        sv, ov = self.val, other.val
        if sv == INF and ov == INF:
            return PAdicScalar(F, INF, 0, prec)
        vmin = min(sv, ov)
        if vmin >= prec:
            return PAdicScalar(F, INF, 0, prec)
        p = F.p
        mod = p ** (prec - vmin)
        n = 0
        if sv != INF:
            n += self.unit * p ** (sv - vmin)
        if ov != INF:
            n += other.unit * p ** (ov - vmin)
        n %= mod
        if n == 0:
            return PAdicScalar(F, INF, 0, prec)
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return PAdicScalar(F, vmin + k, n, prec)

    __radd__ = __add__

    def __neg__(self) -> "PAdicScalar":
        if self.val == INF:
            return self
        mod = self.F.p ** (self.prec - self.val)
        return PAdicScalar(self.F, self.val, (-self.unit) % mod, self.prec)

    def __sub__(self, other) -> "PAdicScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PAdicScalar":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "PAdicScalar":
        other = self._coerce(other)
        F = self.F
        sv, ov = self.val, other.val
        if sv == INF or ov == INF:
            if sv == INF and ov == INF:
                prec = self.prec + other.prec
            elif sv == INF:
                prec = self.prec + ov
            else:
                prec = other.prec + sv
            return PAdicScalar(F, INF, 0, prec)
        r = min(self.prec - sv, other.prec - ov)
        v = sv + ov
        return PAdicScalar(F, v, self.unit * other.unit % F.p**r, v + r)

    __rmul__ = __mul__

    def inverse(self) -> "PAdicScalar":
        if self.val == INF:
            raise InverseOfZero("inverse of zero")
        r = self.prec - self.val
        mod = self.F.p**r
        return PAdicScalar(self.F, -self.val, pow(self.unit, -1, mod), -self.val + r)

    def __truediv__(self, other) -> "PAdicScalar":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "PAdicScalar":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PAdicScalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = self._coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        if self.val == INF:
            return f"O({self.F.p}^{self.prec})"
        return f"{self.F.p}^{self.val}*{self.unit} + O({self.F.p}^{self.prec})"


def is_square_mod(x: PAdicScalar, m: int) -> bool:
    """Whether ``x`` is congruent to a square modulo ``p**m``."""
    if x.val == INF or x.val >= m:
        if x.prec < m:
            raise PrecisionLoss(f"cannot decide modulo p^{m}")
        return True
    if x.val % 2:
        return False
    return legendre(x.unit, x.F.p) == 1


def padic_sqrt(x: PAdicScalar) -> PAdicScalar:
    """Square root by Hensel lifting a residue root (p odd)."""
    F = x.F
    if x.val == INF:
        return PAdicScalar(F, INF, 0, x.prec / 2 if x.prec == INF else x.prec // 2)
    if x.val % 2:
        raise NotASquare("odd valuation")
    p = F.p
    if legendre(x.unit, p) != 1:
        raise NotASquare("unit part is not a residue square")
    r = x.prec - x.val
    if r < 1:
        raise PrecisionLoss("no significant digits")
    root = min(sqrt_mod(x.unit % p, p, all_roots=True))
    k = 1
    while k < r:
        k = min(2 * k, r)
        mod = p**k
        root = (root - (root * root - x.unit) * pow(2 * root, -1, mod)) % mod
    return PAdicScalar(F, x.val // 2, root, x.val // 2 + r)


def hilbert_symbol(a: PAdicScalar, b: PAdicScalar) -> int:
    """Quadratic Hilbert symbol (a, b)_p for odd p."""
    if a.is_zero() or b.is_zero():
        raise InverseOfZero("Hilbert symbol of zero")
    p = a.F.p
    al, be = a.val, b.val
    eps = (p - 1) // 2
    sign = -1 if (al * be * eps) % 2 else 1
    u = legendre(a.unit, p) if be % 2 else 1
    w = legendre(b.unit, p) if al % 2 else 1
    return sign * u * w


# -- quadratic extensions ---------------------------------------------------


@dataclass(frozen=True)
class QuadExtDescriptor:
    """E = F(sqrt D) with v(D) in {0, 1}; ramified exactly when v(D) = 1."""

    F: FieldDescriptor
    D: Fraction

    def __post_init__(self):
        object.__setattr__(self, "D", Fraction(self.D))
        d = self.F(self.D)
        if d.is_zero() or d.val not in (0, 1):
            raise ConfigError("need v(D) in {0, 1}")
        if d.val == 0 and legendre(d.unit, self.F.p) == 1:
            raise ConfigError(f"D={self.D} is a square in Q_{self.F.p}")

    @property
    def p(self) -> int:
        return self.F.p

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def e(self) -> int:
        return 2 if self.ramified else 1

    @cached_property
    def ramified(self) -> bool:
        return vp_int(self.D.numerator, self.F.p) - vp_int(self.D.denominator, self.F.p) == 1

    @cached_property
    def Dp(self) -> PAdicScalar:
        return self.F(self.D)

    @property
    def xi(self) -> Fraction:
        """Unit with uniformizer**2 = xi * p (ramified case)."""
        return self.D / self.F.p if self.ramified else Fraction(1)

    def __call__(self, a, b=0) -> "QuadExtScalar":
        return QuadExtScalar(self, self.F(a), self.F(b))

    def sqrtD(self) -> "QuadExtScalar":
        return self(0, 1)

    def uniformizer(self) -> "QuadExtScalar":
        return self.sqrtD() if self.ramified else self(self.F.p)

    def eta(self, x: PAdicScalar) -> int:
        """Quadratic character of F^x attached to E/F."""
        return hilbert_symbol(self.F(x), self.Dp)

    def with_precision(self, K: int) -> "QuadExtDescriptor":
        return QuadExtDescriptor(self.F.with_precision(K), self.D)


class QuadExtScalar:
    """a + b sqrt(D)."""

    __slots__ = ("E", "a", "b")

    def __init__(self, E: QuadExtDescriptor, a: PAdicScalar, b: PAdicScalar):
        self.E = E
        self.a = a
        self.b = b

    def _coerce(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            return other
        return QuadExtScalar(self.E, self.a._coerce(other), self.E.F.zero())

    def __add__(self, other):
        o = self._coerce(other)
        return QuadExtScalar(self.E, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(self.E, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, QuadExtScalar):
            D = self.E.Dp
            a = self.a * other.a + self.b * other.b * D
            b = self.a * other.b + self.b * other.a
            return QuadExtScalar(self.E, a, b)
        s = self.a._coerce(other)
        return QuadExtScalar(self.E, self.a * s, self.b * s)

    __rmul__ = __mul__

    def conj(self) -> "QuadExtScalar":
        return QuadExtScalar(self.E, self.a, -self.b)

    def trace(self) -> PAdicScalar:
        return self.a + self.a

    def norm(self) -> PAdicScalar:
        return self.a * self.a - self.b * self.b * self.E.Dp

    def inverse(self) -> "QuadExtScalar":
        n = self.norm()
        if n.is_zero():
            raise InverseOfZero("inverse of zero in E")
        ninv = n.inverse()
        return QuadExtScalar(self.E, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        if isinstance(other, QuadExtScalar):
            return self * other.inverse()
        return self * self.a._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.E(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def valuation(self):
        """v_E, normalized so that the uniformizer has valuation 1."""
        if self.E.ramified:
            return min(2 * self.a.val, 2 * self.b.val + 1)
        return min(self.a.val, self.b.val)

    def unit_part(self) -> tuple[int, "QuadExtScalar"]:
        """(k, u) with self = uniformizer**k * u and u a unit."""
        k = self.valuation()
        if k == INF:
            raise InverseOfZero("zero has no unit part")
        E = self.E
        if E.ramified:
            s = E.F(E.D) ** (k // 2)
            x = QuadExtScalar(E, self.a / s, self.b / s)
            if k % 2:
                # (a + b sqrt D) / sqrt D = b + (a / D) sqrt D
                x = QuadExtScalar(E, x.b, x.a / E.Dp)
            return k, x
        s = E.F(E.p) ** k
        return k, QuadExtScalar(E, self.a / s, self.b / s)

    def embed_matrix(self) -> "Mat2":
        """Standard embedding x + y sqrt D -> [[x, y], [y D, x]]."""
        return Mat2(self.a, self.b, self.b * self.E.Dp, self.a)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        return self.a == o.a and self.b == o.b

    __hash__ = None

    def __repr__(self) -> str:
        return f"({self.a.to_fraction()} + {self.b.to_fraction()}*sqrt({self.E.D}))"


class Mat2:
    """2x2 matrix [[a, b], [c, d]] over PAdicScalar."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_rows(cls, F: FieldDescriptor, rows: Sequence[Sequence]) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(F(a), F(b), F(c), F(d))

    @classmethod
    def identity(cls, F: FieldDescriptor) -> "Mat2":
        return cls(F(1), F.zero(), F.zero(), F(1))

    @classmethod
    def diag(cls, F: FieldDescriptor, x, y=1) -> "Mat2":
        return cls(F(x), F.zero(), F.zero(), F(y))

    @classmethod
    def unipotent(cls, F: FieldDescriptor, u) -> "Mat2":
        return cls(F(1), F(u), F.zero(), F(1))

    @property
    def F(self) -> FieldDescriptor:
        return self.a.F

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def det(self) -> PAdicScalar:
        return self.a * self.d - self.b * self.c

    def trace(self) -> PAdicScalar:
        return self.a + self.d

    def inverse(self) -> "Mat2":
        dinv = self.det().inverse()
        return Mat2(self.d * dinv, -self.b * dinv, -self.c * dinv, self.a * dinv)

    def valuation(self):
        return min(x.val for x in self.entries())

    def key(self) -> tuple:
        return tuple((x.val, x.unit, x.prec) for x in self.entries())

    def __eq__(self, other) -> bool:
        return all(x == y for x, y in zip(self.entries(), other.entries()))

    __hash__ = None

    def __repr__(self) -> str:
        f = [x.to_fraction() for x in self.entries()]
        return f"[[{f[0]}, {f[1]}], [{f[2]}, {f[3]}]]"


# -- unit quotients ---------------------------------------------------------


@dataclass(frozen=True)
class UnitQuotient:
    """Canonical representatives of O^x / U(c) for F or a quadratic E.

    Elements are encoded as integers ("codes").  For E ramified a unit
    a + b sqrt D is encoded by (a mod p^ceil(c/2), b mod p^floor(c/2)); for E
    unramified by (a mod p^c, b mod p^c); for F by a mod p^c.
    """

    base: object
    c: int
    budget: int = DEFAULT_TABLE_BUDGET
    codes: tuple = field(init=False, repr=False, compare=False)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.c < 0:
            raise ConfigError("conductor level must be >= 0")
        size = self.expected_size()
        if size > self.budget:
            raise BudgetExceeded(f"unit quotient of size {size} exceeds budget {self.budget}")
        codes = tuple(self._enumerate())
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "index", {c: i for i, c in enumerate(codes)})

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def is_extension(self) -> bool:
        return isinstance(self.base, QuadExtDescriptor)

    @cached_property
    def digits(self) -> tuple[int, int]:
        """(A, B): the a-part lives mod p^A, the b-part mod p^B."""
        c = self.c
        if not self.is_extension:
            return c, 0
        if self.base.ramified:
            return (c + 1) // 2, c // 2
        return c, c

    @property
    def code_range(self) -> int:
        A, B = self.digits
        return self.p ** (A + B)

    def expected_size(self) -> int:
        q = self.p
        if self.c == 0:
            return 1
        if self.is_extension and not self.base.ramified:
            return (q * q - 1) * q ** (2 * (self.c - 1))
        return (q - 1) * q ** (self.c - 1)

    def __len__(self) -> int:
        return len(self.codes)

    def _enumerate(self) -> Iterator[int]:
        p = self.p
        A, B = self.digits
        if self.c == 0:
            yield 0
            return
        PB = p**B
        for a in range(p**A):
            for b in range(PB):
                if self.is_extension and not self.base.ramified:
                    if a % p == 0 and b % p == 0:
                        continue
                elif a % p == 0:
                    continue
                yield a * PB + b

    def split(self, code: int) -> tuple[int, int]:
        PB = self.p ** self.digits[1]
        return divmod(code, PB)

    def join(self, a: int, b: int) -> int:
        A, B = self.digits
        p = self.p
        return (a % p**A) * p**B + (b % p**B)

    def mul(self, x: int, y: int) -> int:
        if self.c == 0:
            return 0
        if not self.is_extension:
            return x * y % self.p**self.c
        a1, b1 = self.split(x)
        a2, b2 = self.split(y)
        D = self._D_int()
        return self.join(a1 * a2 + b1 * b2 * D, a1 * b2 + a2 * b1)

    def conj(self, x: int) -> int:
        if self.c == 0 or not self.is_extension:
            return x
        a, b = self.split(x)
        return self.join(a, -b)

    def _D_int(self) -> int:
        D = self.base.D
        A, _ = self.digits
        mod = self.p ** (A + 1)
        return D.numerator * pow(D.denominator, -1, mod) % mod

    def identity(self) -> int:
        return self.join(1, 0) if self.c else 0

    def code_of(self, x) -> int:
        """Code of a unit given as PAdicScalar / QuadExtScalar / rational."""
        if self.c == 0:
            return 0
        A, B = self.digits
        if self.is_extension:
            if not isinstance(x, QuadExtScalar):
                x = self.base(x)
            return self.join(x.a.int_mod(A), x.b.int_mod(B))
        if not isinstance(x, PAdicScalar):
            x = self.base(x)
        return x.int_mod(A)

    def representative(self, code: int):
        a, b = self.split(code)
        if self.is_extension:
            return self.base(a, b)
        return self.base(a)

    def level_of(self, code: int) -> int:
        """Largest k <= c with the element in U(k) (c if it is the identity)."""
        if self.c == 0:
            return 0
        a, b = self.split(code)
        p = self.p
        if not self.is_extension:
            return min(vp_int(a - 1, p), self.c)
        A, B = self.digits
        va = min(vp_int((a - 1) % p**A, p), A) if A else 0
        vb = min(vp_int(b, p), B) if B else 0
        if self.base.ramified:
            lv = min(2 * va if va < A else INF, 2 * vb + 1 if vb < B else INF)
        else:
            lv = min(va if va < A else INF, vb if vb < B else INF)
        return self.c if lv == INF else min(lv, self.c)


def unit_quotient_table(base, c: int, budget: int = DEFAULT_TABLE_BUDGET) -> UnitQuotient:
    return UnitQuotient(base, c, budget)
