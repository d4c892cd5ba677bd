"""Truncated q-series with exact coefficients and explicit precision.

A :class:`QSeries` is ``q**offset * sum(c[i] * q**(i/denom))`` known for
every exponent strictly below ``prec``.  ``offset`` and ``prec`` are
Fractions, so eta prefactors q^(1/24) and theta prefactors q^(m^2/8p)
cost nothing beyond the shift.

Products of ``(q^a; q^n)_inf`` factors are expanded by multiplying the
finitely many ``(1 - q^(a+jn))`` factors that matter below the truncation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, floor, ceil
from typing import Iterable, Sequence

from .exactnum import Cyclo, root_of_unity

__all__ = [
    "ProductSpec",
    "QSeries",
    "SeriesError",
    "expand_product",
    "expand_theta_constant",
    "first_mismatch",
    "q_derive",
    "series_from_record",
    "subst_power",
]


class SeriesError(ArithmeticError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _is_zero(c) -> bool:
    return not c


def _convolve(a: Sequence, b: Sequence, n: int) -> list:
    """First ``n`` coefficients of the product of two coefficient lists."""
    out = [0] * n
    nb = min(len(b), n)
    bnz = [(j, y) for j, y in enumerate(b[:nb]) if y]
    for i in range(min(len(a), n)):
        x = a[i]
        if not x:
            continue
        lim = n - i
        for j, y in bnz:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


class QSeries:
    __slots__ = ("offset", "denom", "coeffs", "prec")

    def __init__(self, coeffs: Iterable, prec, offset=0, denom: int = 1):
        self.offset = Fraction(offset)
        self.denom = int(denom)
        if self.denom < 1:
            raise SeriesError("grading denominator must be positive")
        self.prec = Fraction(prec)
        n = max(0, ceil((self.prec - self.offset) * self.denom))
        cs = list(coeffs)[:n]
        if len(cs) < n:
            cs.extend([0] * (n - len(cs)))
        self.coeffs = cs

    # construction --------------------------------------------------------
    @classmethod
    def one(cls, prec) -> "QSeries":
        return cls([1], prec)

    @classmethod
    def zero(cls, prec) -> "QSeries":
        return cls([], prec)

    @classmethod
    def monomial(cls, coeff, exponent, prec) -> "QSeries":
        return cls([coeff], prec, offset=exponent)

    @classmethod
    def from_dict(cls, terms: dict, prec, denom: int = 1) -> "QSeries":
        """Build from ``{exponent: coefficient}`` on the 1/denom lattice."""
        if not terms:
            return cls.zero(prec)
        lo = min(Fraction(e) for e in terms)
        cs = [0] * max(0, ceil((Fraction(prec) - lo) * denom))
        for e, c in terms.items():
            idx = (Fraction(e) - lo) * denom
            if idx.denominator != 1:
                raise SeriesError(f"exponent {e} off the 1/{denom} lattice")
            if int(idx) < len(cs):
                cs[int(idx)] = c
        return cls(cs, prec, offset=lo, denom=denom)

    # views ---------------------------------------------------------------
    def exponent(self, i: int) -> Fraction:
        return self.offset + Fraction(i, self.denom)

    def terms(self):
        """Yield ``(exponent, coefficient)`` for nonzero stored terms."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.exponent(i), c

    def __getitem__(self, e) -> object:
        e = Fraction(e)
        if e >= self.prec:
            raise SeriesError(f"coefficient of q^{e} beyond precision {self.prec}")
        idx = (e - self.offset) * self.denom
        if idx < 0 or idx.denominator != 1:
            return 0
        return self.coeffs[int(idx)]

    def valuation(self):
        """Exponent of the first nonzero coefficient, or None."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.exponent(i)
        return None

    def leading(self):
        for c in self.coeffs:
            if c:
                return c
        return 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        """All nonzero terms have integer exponents and integer coefficients."""
        for e, c in self.terms():
            if e.denominator != 1:
                return False
            if isinstance(c, Cyclo):
                if any(c.num[1:]) or c.den != 1:
                    return False
            elif Fraction(c).denominator != 1:
                return False
        return True

    def as_list(self, start: int = 0, stop: int | None = None) -> list:
        """Coefficients of q^start .. q^(stop-1) on the integer lattice."""
        stop = int(floor(self.prec - Fraction(1, 10**9))) + 1 if stop is None else stop
        return [self[e] for e in range(start, stop)]

    # lattice management ----------------------------------------------------
    def regrade(self, offset: Fraction, denom: int) -> "QSeries":
        """Same series stored from ``offset`` on the 1/denom lattice."""
        offset = Fraction(offset)
        if denom % self.denom:
            raise SeriesError("can only refine the grading")
        step = denom // self.denom
        shift = (self.offset - offset) * denom
        if shift.denominator != 1 or shift < 0:
            raise SeriesError("offset not compatible with target lattice")
        shift = int(shift)
        n = max(0, ceil((self.prec - offset) * denom))
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            k = shift + i * step
            if k < n:
                out[k] = c
        return QSeries(out, self.prec, offset, denom)

    def _common(self, other: "QSeries") -> tuple["QSeries", "QSeries"]:
        d = _lcm(self.denom, other.denom)
        diff = (self.offset - other.offset) * d
        if diff.denominator != 1:
            d = _lcm(d, diff.denominator)
        lo = min(self.offset, other.offset)
        return self.regrade(lo, d), other.regrade(lo, d)

    def truncate(self, prec) -> "QSeries":
        prec = Fraction(prec)
        if prec > self.prec:
            raise SeriesError("cannot raise precision by truncation")
        return QSeries(self.coeffs, prec, self.offset, self.denom)

    def compact(self) -> "QSeries":
        """Drop leading zeros and coarsen the grading where possible."""
        first = next((i for i, c in enumerate(self.coeffs) if c), None)
        if first is None:
            return QSeries([], self.prec, min(self.prec, 0) if self.prec < 0 else 0)
        offset = self.exponent(first)
        cs = self.coeffs[first:]
        g = 0
        for i, c in enumerate(cs):
            if c:
                g = gcd(g, i)
        step = gcd(g, self.denom) if g else self.denom
        if step > 1:
            cs = cs[::step]
        return QSeries(cs, self.prec, offset, self.denom // step)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + QSeries([other], self.prec)
        a, b = self._common(other)
        prec = min(a.prec, b.prec)
        n = max(0, ceil((prec - a.offset) * a.denom))
        ca, cb = a.coeffs, b.coeffs
        out = [
            (ca[i] if i < len(ca) else 0) + (cb[i] if i < len(cb) else 0)
            for i in range(n)
        ]
        return QSeries(out, prec, a.offset, a.denom)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.prec, self.offset, self.denom)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        return QSeries([c * x for x in self.coeffs], self.prec, self.offset, self.denom)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        d = _lcm(self.denom, other.denom)
        a = self.regrade(self.offset, d)
        b = other.regrade(other.offset, d)
        offset = a.offset + b.offset
        prec = min(a.prec + b.offset, b.prec + a.offset)
        n = max(0, ceil((prec - offset) * d))
        return QSeries(_convolve(a.coeffs, b.coeffs, n), prec, offset, d)

    __rmul__ = __mul__

    def shift(self, e) -> "QSeries":
        """Multiply by q**e."""
        e = Fraction(e)
        return QSeries(self.coeffs, self.prec + e, self.offset + e, self.denom)

    def invert(self) -> "QSeries":
        s = self.compact()
        if s.is_zero():
            raise SeriesError("cannot invert a series with no nonzero coefficient")
        v = s.offset
        c0 = s.coeffs[0]
        prec = s.prec - 2 * v
        n = max(0, ceil((prec + v) * s.denom))
        a = s.coeffs
        if c0 == 1 or c0 == -1:
            inv0 = c0
            exact = True
        else:
            inv0 = (1 / c0) if isinstance(c0, Cyclo) else Fraction(1) / c0
            exact = False
        out = [0] * n
        if n:
            out[0] = inv0
        la = len(a)
        for k in range(1, n):
            acc = 0
            for j in range(1, min(k, la - 1) + 1):
                if a[j]:
                    acc += a[j] * out[k - j]
            out[k] = -acc * inv0 if exact else -(acc * inv0)
        return QSeries(out, prec, -v, s.denom)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        return self.scale(Fraction(1) / other if not isinstance(other, Cyclo) else 1 / other)

    def __pow__(self, e: int):
        if e < 0:
            return self.invert() ** (-e)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        if result is None:
            v = self.valuation()
            # f**0 == 1, known to the relative precision of f
            rel = self.prec - (v if v is not None else self.offset)
            return QSeries.one(rel)
        return result

    def root(self, n: int) -> "QSeries":
        """Principal n-th root of a series whose leading coefficient is 1."""
        s = self.compact()
        if s.is_zero() or s.coeffs[0] != 1:
            raise SeriesError("n-th root needs leading coefficient 1")
        v = s.offset
        rel = s.prec - v
        m = max(0, ceil(rel * s.denom))
        a = s.coeffs
        # g = f**(1/n); g' f = (1/n) f' g on the normalised series
        g = [Fraction(0)] * m
        if m:
            g[0] = Fraction(1)
        alpha = Fraction(1, n)
        for k in range(1, m):
            acc = Fraction(0)
            for j in range(1, min(k, len(a) - 1) + 1):
                if a[j]:
                    acc += (alpha * j - (k - j)) * a[j] * g[k - j]
            g[k] = acc / k
        return QSeries(g, v / n + rel, v / n, s.denom)

    # comparison ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return first_mismatch(self, other) is None and self.prec == other.prec

    __hash__ = None

    def agrees_with(self, other: "QSeries") -> bool:
        """Coefficient-wise agreement up to the smaller precision."""
        return first_mismatch(self, other) is None

    def __repr__(self):
        return f"QSeries({self.pretty(8)})"

    def pretty(self, max_terms: int = 12) -> str:
        parts = []
        for e, c in self.terms():
            if len(parts) >= max_terms:
                parts.append("...")
                break
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "q"
            else:
                mono = f"q^{e}" if e.denominator == 1 else f"q^({e})"
            if isinstance(c, Cyclo):
                parts.append(f"({c!r}){'*' + mono if mono else ''}")
                continue
            c = Fraction(c)
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        body = " + ".join(parts).replace("+ -", "- ") or "0"
        p = self.prec
        return f"{body} + O(q^{p})" if p.denominator == 1 else f"{body} + O(q^({p}))"

    # serialization -----------------------------------------------------------
    def to_record(self) -> dict:
        def enc(c):
            if isinstance(c, Cyclo):
                return {"cyclo": c.m, "num": [str(x) for x in c.num], "den": str(c.den)}
            return str(Fraction(c))

        return {
            "offset": str(self.offset),
            "denom": self.denom,
            "prec": str(self.prec),
            "coeffs": [enc(c) for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


def series_from_record(rec: dict | str) -> QSeries:
    if isinstance(rec, str):
        rec = json.loads(rec)

    def dec(c):
        if isinstance(c, dict):
            return Cyclo(int(c["cyclo"]), [int(x) for x in c["num"]], int(c["den"]))
        f = Fraction(c)
        return f.numerator if f.denominator == 1 else f

    return QSeries(
        [dec(c) for c in rec["coeffs"]],
        Fraction(rec["prec"]),
        Fraction(rec["offset"]),
        int(rec["denom"]),
    )


def first_mismatch(f: QSeries, g: QSeries):
    """First exponent below the common precision where f and g differ.

    Returns ``(exponent, f_coeff, g_coeff)`` or None.
    """
    a, b = f._common(g)
    prec = min(a.prec, b.prec)
    n = max(0, ceil((prec - a.offset) * a.denom))
    ca, cb = a.coeffs, b.coeffs
    for i in range(n):
        x = ca[i] if i < len(ca) else 0
        y = cb[i] if i < len(cb) else 0
        if x != y:
            return a.exponent(i), x, y
    return None


def q_derive(f: QSeries) -> QSeries:
    """Apply q d/dq."""
    out = []
    for i, c in enumerate(f.coeffs):
        e = f.exponent(i)
        if not c or e == 0:
            out.append(0)
        elif e.denominator == 1:
            out.append(c * int(e))
        else:
            out.append(c * e)
    return QSeries(out, f.prec, f.offset, f.denom)


def subst_power(f: QSeries, k: int) -> QSeries:
    """Substitute q -> q**k."""
    if k < 1:
        raise SeriesError("substitution power must be positive")
    if k == 1:
        return f
    n = max(0, ceil((f.prec * k - f.offset * k) * f.denom))
    out = [0] * n
    for i, c in enumerate(f.coeffs):
        j = i * k
        if j < n:
            out[j] = c
    return QSeries(out, f.prec * k, f.offset * k, f.denom)


# ----------------------------------------------------------------------------
# products


@dataclass(frozen=True)
class ProductSpec:
    """``phase * q**q_prefix * prod (q^a; q^n)_inf ** e``."""

    factors: tuple[tuple[int, int, int], ...]
    q_prefix: Fraction = Fraction(0)
    phase: object = 1

    def __post_init__(self):
        facs = tuple((int(a), int(n), int(e)) for a, n, e in self.factors)
        for a, n, e in facs:
            if n < 1 or not 0 < a <= n:
                raise SeriesError(f"bad factor (q^{a}; q^{n})")
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "q_prefix", Fraction(self.q_prefix))

    def exponent_map(self, modulus: int) -> dict[int, int]:
        """Rewrite over ``(q^r; q^modulus)`` factors, r in 1..modulus.

        Every factor modulus must divide ``modulus``.
        """
        out: dict[int, int] = {}
        for a, n, e in self.factors:
            if modulus % n:
                raise SeriesError(f"modulus {n} does not divide {modulus}")
            for j in range(modulus // n):
                r = a + j * n
                r = (r - 1) % modulus + 1
                out[r] = out.get(r, 0) + e
        return {r: e for r, e in sorted(out.items()) if e}

    def __mul__(self, other: "ProductSpec") -> "ProductSpec":
        return ProductSpec(
            self.factors + other.factors,
            self.q_prefix + other.q_prefix,
            self.phase * other.phase,
        )

    def __pow__(self, e: int) -> "ProductSpec":
        return ProductSpec(
            tuple((a, n, k * e) for a, n, k in self.factors),
            self.q_prefix * e,
            self.phase**e,
        )


def _expand_factors(factors, n_terms: int) -> list[int]:
    """Integer coefficients of prod (q^a; q^n)^e through q^(n_terms-1)."""
    c = [0] * n_terms
    if n_terms:
        c[0] = 1
    for a, n, e in factors:
        if e == 0:
            continue
        m = a
        while m < n_terms:
            if e > 0:
                for _ in range(e):
                    for i in range(n_terms - 1, m - 1, -1):
                        c[i] -= c[i - m]
            else:
                for _ in range(-e):
                    for i in range(m, n_terms):
                        c[i] += c[i - m]
            m += n
    return c


def expand_product(spec: ProductSpec, T: int) -> QSeries:
    """Expand ``spec`` exactly through q^T (precision T + 1)."""
    if T < 0:
        raise SeriesError("order must be nonnegative")
    rel = T - spec.q_prefix
    n_terms = max(0, floor(rel) + 1)
    c = _expand_factors(spec.factors, n_terms)
    if spec.phase != 1:
        c = [spec.phase * x for x in c]
    return QSeries(c, spec.q_prefix + n_terms, spec.q_prefix, 1)


def theta_constant_spec(p: int, k: int) -> ProductSpec:
    """Triple-product form of the order-p theta constant of index k.

    theta[m/p; 1](p tau) = exp(pi i m/(2p)) q^(m^2/(8p))
                           (q^((p-m)/2), q^((p+m)/2), q^p; q^p)_inf,  m = 2k-1.
    """
    if p < 3 or p % 2 == 0:
        raise SeriesError("theta constants need an odd order p >= 3")
    if not 1 <= k <= (p - 1) // 2:
        raise SeriesError(f"theta index {k} out of range for p = {p}")
    m = 2 * k - 1
    return ProductSpec(
        (((p - m) // 2, p, 1), ((p + m) // 2, p, 1), (p, p, 1)),
        Fraction(m * m, 8 * p),
        root_of_unity(Fraction(m, 4 * p)),
    )


def expand_theta_constant(p: int, k: int, T: int) -> tuple[Cyclo, QSeries]:
    """Return ``(phase, series)`` with the theta constant = phase * series."""
    spec = theta_constant_spec(p, k)
    bare = ProductSpec(spec.factors, spec.q_prefix)
    return spec.phase, expand_product(bare, T)
