"""Exact rationals and elements of cyclotomic fields Q(zeta_m).

Rationals are plain :class:`fractions.Fraction` values.  A :class:`Cyclo`
stores an integer coefficient vector over a common positive denominator,
reduced modulo the m-th cyclotomic polynomial, so equal field elements
always have identical representations.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

try:
    import flint
except ImportError:  # pure-Python fallback below
    flint = None

__all__ = [
    "Cyclo",
    "CycloError",
    "Irrational",
    "as_rational",
    "coerce",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity",
]


class CycloError(ArithmeticError):
    """Raised for order mismatches and division by zero."""


class Irrational(ValueError):
    """Signal from :func:`as_rational` that a value is not in Q."""


def euler_phi(m: int) -> int:
    result, n, f = m, m, 2
    while f * f <= n:
        if n % f == 0:
            while n % f == 0:
                n //= f
            result -= result // f
        f += 1
    if n > 1:
        result -= result // n
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both monic or den monic; coefficients low -> high
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = q
        if q:
            for j, d in enumerate(den):
                num[i + j] -= q * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Reductions of x^k mod Phi_m for 0 <= k < 2*phi(m)."""
    phi = euler_phi(m)
    cp = cyclotomic_poly(m)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(2 * phi):
        rows.append(tuple(cur))
        # multiply by x
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cp[j]
    return tuple(rows)


def _reduce(coeffs: list[int], m: int) -> list[int]:
    phi = euler_phi(m)
    if len(coeffs) <= phi:
        return coeffs + [0] * (phi - len(coeffs))
    cp = cyclotomic_poly(m)
    c = list(coeffs)
    for deg in range(len(c) - 1, phi - 1, -1):
        top = c[deg]
        if top:
            base = deg - phi
            for j in range(phi):
                c[base + j] -= top * cp[j]
    return c[:phi]


class Cyclo:
    """Element of Q(zeta_m) as ``sum(coeffs[i] * zeta_m**i) / den``."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num, den: int = 1, *, _reduced: bool = False):
        if m < 1:
            raise ValueError("cyclotomic order must be positive")
        if den == 0:
            raise CycloError("zero denominator")
        num = [int(c) for c in num]
        if not _reduced:
            num = _reduce(num, m)
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.m = m
        self.num = tuple(num)
        self.den = den

    # construction -----------------------------------------------------
    @classmethod
    def from_rational(cls, value, m: int = 1) -> "Cyclo":
        value = Fraction(value)
        num = [0] * euler_phi(m)
        num[0] = value.numerator
        return cls(m, num, value.denominator, _reduced=True)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Cyclo":
        row = _power_table(m)[k % m] if k % m < 2 * euler_phi(m) else None
        if row is None:
            return cls(m, [0] * (k % m) + [1])
        return cls(m, row, _reduced=True)

    @classmethod
    def from_rationals(cls, m: int, values) -> "Cyclo":
        fr = [Fraction(v) for v in values]
        den = 1
        for v in fr:
            den = den * v.denominator // gcd(den, v.denominator)
        return cls(m, [v.numerator * (den // v.denominator) for v in fr], den)

    # views ---------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return len(self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def lift(self, m: int) -> "Cyclo":
        """Embed into Q(zeta_m) for a multiple ``m`` of the current order."""
        if m == self.m:
            return self
        if m % self.m:
            raise CycloError(f"cannot embed Q(zeta_{self.m}) into Q(zeta_{m})")
        step = m // self.m
        big = [0] * (step * (len(self.num) - 1) + 1)
        for i, c in enumerate(self.num):
            big[i * step] = c
        return Cyclo(m, big, self.den)

    def conjugate(self) -> "Cyclo":
        m = self.m
        out = [0] * (m + 1)
        for i, c in enumerate(self.num):
            out[(-i) % m] += c
        return Cyclo(m, out, self.den)

    def galois(self, k: int) -> "Cyclo":
        """Apply zeta -> zeta**k (k coprime to m)."""
        m = self.m
        if gcd(k, m) != 1:
            raise CycloError("Galois exponent must be a unit mod m")
        out = [0] * m
        for i, c in enumerate(self.num):
            out[(i * k) % m] += c
        return Cyclo(m, out, self.den)

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * z**i for i, c in enumerate(self.num)) / self.den

    # arithmetic ------------------------------------------------------
    def _coerce_other(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            if other.m != self.m:
                raise CycloError(
                    f"order mismatch {self.m} vs {other.m}; use coerce() first"
                )
            return other
        if isinstance(other, (int, Rational)):
            return Cyclo.from_rational(other, self.m)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        den = self.den * o.den // gcd(self.den, o.den)
        a, b = den // self.den, den // o.den
        return Cyclo(
            self.m, [x * a + y * b for x, y in zip(self.num, o.num)], den, _reduced=True
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.m, [-c for c in self.num], self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        a, b = self.num, o.num
        if not any(b[1:]):
            c = b[0]
            return Cyclo(self.m, [x * c for x in a], self.den * o.den)
        if not any(a[1:]):
            c = a[0]
            return Cyclo(self.m, [x * c for x in b], self.den * o.den)
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyclo(self.m, prod, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise CycloError("division by zero in cyclotomic field")
        if not any(self.num[1:]):
            return Cyclo.from_rational(Fraction(self.den, self.num[0]), self.m)
        if flint is not None:
            g, u, _ = flint.fmpq_poly(list(self.num)).xgcd(flint.fmpq_poly(list(cyclotomic_poly(self.m))))
            if g != 1:
                raise CycloError("element not invertible (non-coprime to Phi_m)")
            inv = [Fraction(int(c.p), int(c.q)) * self.den for c in u.coeffs()]
            return Cyclo.from_rationals(self.m, inv or [0])
        return self._inverse_euclid()

    def _inverse_euclid(self) -> "Cyclo":
        # extended Euclid over Q on (self, Phi_m)
        modulus = [Fraction(c) for c in cyclotomic_poly(self.m)]
        a = _trim([Fraction(c, self.den) for c in self.num])
        r0, r1 = modulus, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if len(r1) == 1 and r1[0] == 0:
                break
        # r0 is a nonzero constant gcd
        if len(r0) != 1:
            raise CycloError("element not invertible (non-coprime to Phi_m)")
        inv = [c / r0[0] for c in s0]
        return Cyclo.from_rationals(self.m, inv)

    def __truediv__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclo.from_rational(1, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclo):
            if other.m != self.m:
                try:
                    a, b = coerce(self, other)
                except CycloError:
                    return False
                return a.num == b.num and a.den == b.den
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            return (
                not any(self.num[1:])
                and self.num[0] * f.denominator == f.numerator * self.den
            )
        return NotImplemented

    def __hash__(self):
        if not any(self.num[1:]):
            return hash(Fraction(self.num[0], self.den))
        return hash((self.m, self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.num):
            if not c:
                continue
            coef = Fraction(c, self.den)
            if i == 0:
                terms.append(str(coef))
            elif i == 1:
                terms.append(f"{coef}*z{self.m}")
            else:
                terms.append(f"{coef}*z{self.m}^{i}")
        return "Cyclo(" + (" + ".join(terms) or "0") + ")"


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _poly_divmod(a, b):
    a = list(a)
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


def coerce(a: Cyclo, b: Cyclo) -> tuple[Cyclo, Cyclo]:
    """Lift both arguments to Q(zeta_lcm)."""
    m = a.m * b.m // gcd(a.m, b.m)
    return a.lift(m), b.lift(m)


def root_of_unity(r) -> Cyclo:
    """Exact value of exp(2*pi*i*r) for rational ``r``."""
    r = Fraction(r)
    m = r.denominator
    return Cyclo.zeta(m, r.numerator % m)


def as_rational(a) -> Fraction:
    """Return ``a`` as a Fraction, raising :class:`Irrational` if it is not."""
    if isinstance(a, Cyclo):
        if any(a.num[1:]):
            raise Irrational(repr(a))
        return Fraction(a.num[0], a.den)
    return Fraction(a)
