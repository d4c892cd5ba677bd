"""Eisenstein series q-expansions by divisor sums.

Covers the twisted series E_{k,chi}, the level-one E_{2k}, q -> q^m
rescalings, and the normalized weight-one sums ``script(p, a)``:
the image of (2/(p-1)) * sum_{chi odd} E_{1,chi} under the diamond
operator <a>.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Union

from .characters import DirichletChar, L_at_zero, ell, odd_characters
from .exactnum import Cyclo, as_rational
from .qseries import QSeries, SeriesError, subst_power

__all__ = [
    "Classical",
    "Scaled",
    "Script",
    "Twisted",
    "bernoulli",
    "divisors_upto",
    "expand_eisenstein",
    "generalized_bernoulli",
    "sigma_series",
    "twisted_weight2_principal",
]


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    s = sum(comb(n + 1, j) * bernoulli(j) for j in range(n))
    return -s / (n + 1)


def _bernoulli_poly(k: int, x: Fraction) -> Fraction:
    return sum(comb(k, j) * bernoulli(j) * x ** (k - j) for j in range(k + 1))


def generalized_bernoulli(chi: DirichletChar, k: int) -> Cyclo:
    """B_{k,chi} = p^(k-1) sum_{a=1}^{p} chi(a) B_k(a/p)."""
    p = chi.p
    total = Cyclo.from_rational(0, p - 1)
    for a in range(1, p):
        total = total + chi(a) * _bernoulli_poly(k, Fraction(a, p))
    return total * Fraction(p) ** (k - 1)


@lru_cache(maxsize=8)
def divisors_upto(T: int) -> tuple[tuple[int, ...], ...]:
    divs: list[list[int]] = [[] for _ in range(T + 1)]
    for d in range(1, T + 1):
        for n in range(d, T + 1, d):
            divs[n].append(d)
    return tuple(tuple(x) for x in divs)


def _divs(T: int):
    # reuse a larger table when one is cached
    return divisors_upto(max(T, 1))


@dataclass(frozen=True)
class Twisted:
    chi: DirichletChar
    weight: int

    def __post_init__(self):
        parity = 1 if self.chi.is_odd else 0
        if parity != self.weight % 2:
            raise ValueError("parity condition chi(-1) = (-1)^k violated")


@dataclass(frozen=True)
class Classical:
    weight: int  # 2k

    def __post_init__(self):
        if self.weight < 2 or self.weight % 2:
            raise ValueError("level-one Eisenstein series need even weight >= 2")


@dataclass(frozen=True)
class Scaled:
    base: "EisensteinSpec"
    m: int


@dataclass(frozen=True)
class Script:
    p: int
    a: int


EisensteinSpec = Union[Twisted, Classical, Scaled, Script]


def sigma_series(k: int, T: int, scale=1, constant=0) -> QSeries:
    """constant + scale * sum_{n=1}^{T} sigma_k(n) q^n."""
    divs = _divs(T)
    coeffs = [constant] + [scale * sum(d**k for d in divs[n]) for n in range(1, T + 1)]
    return QSeries(coeffs, T + 1)


def _twisted(chi: DirichletChar, k: int, T: int) -> QSeries:
    L = -generalized_bernoulli(chi, k) / k  # L(1-k, chi)
    factor = 2 / L
    divs = _divs(T)
    vals = [chi(d) * d ** (k - 1) for d in range(T + 1)]
    out: list = [1]
    for n in range(1, T + 1):
        s = Cyclo.from_rational(0, chi.p - 1)
        for d in divs[n]:
            s = s + vals[d]
        out.append(factor * s)
    return QSeries(out, T + 1)


@lru_cache(maxsize=64)
def _script_coeffs(p: int, a: int, T: int) -> tuple[Fraction, ...]:
    chars = odd_characters(p)
    const = Cyclo.from_rational(0, p - 1)
    for chi in chars:
        const = const + chi(a)
    scale = Fraction(2, p - 1)
    out = [scale * as_rational(const)]
    ells = [ell(p, a * d) for d in range(p)]
    divs = _divs(T)
    for n in range(1, T + 1):
        out.append(scale * sum(ells[d % p] for d in divs[n]))
    return tuple(out)


def expand_eisenstein(spec: EisensteinSpec, T: int) -> QSeries:
    """Exact expansion through q^T."""
    if T < 0:
        raise SeriesError("order must be nonnegative")
    if isinstance(spec, Twisted):
        return _twisted(spec.chi, spec.weight, T)
    if isinstance(spec, Classical):
        k = spec.weight
        zeta = -bernoulli(k) / k  # zeta(1-k)
        scale = 2 / zeta
        return sigma_series(k - 1, T, scale=_int_if_possible(scale), constant=1)
    if isinstance(spec, Scaled):
        base = expand_eisenstein(spec.base, T // spec.m)
        return subst_power(base, spec.m).truncate(min(base.prec * spec.m, T + 1))
    if isinstance(spec, Script):
        cs = _script_coeffs(spec.p, spec.a % spec.p, T)
        return QSeries([_int_if_possible(c) for c in cs], T + 1)
    raise TypeError(f"unknown Eisenstein spec {spec!r}")


def _int_if_possible(c: Fraction):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def twisted_weight2_principal(p: int, c, T: int) -> QSeries:
    """1 + c * sum_n (sum_{d | n, p not | d} d) q^n."""
    divs = _divs(T)
    c = _int_if_possible(Fraction(c))
    out = [1] + [c * sum(d for d in divs[n] if d % p) for n in range(1, T + 1)]
    return QSeries(out, T + 1)


def L_values(p: int) -> dict[int, Cyclo]:
    """L(0, chi) for every odd chi mod p, keyed by character exponent."""
    return {chi.exponent: L_at_zero(chi) for chi in odd_characters(p)}
