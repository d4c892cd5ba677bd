"""Dirichlet characters modulo a prime, their values at s = 0, and the
rational kernel ``ell(p, d) = 2 * sum_{chi odd} chi(d) / L(0, chi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import Cyclo, Irrational, as_rational

__all__ = [
    "DirichletChar",
    "L_at_zero",
    "character_matrix",
    "dlog_table",
    "ell",
    "is_prime",
    "odd_characters",
    "orthogonality_sum",
    "primitive_root",
    "principal_character",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    _check_prime(p)
    if p == 2:
        return 1
    order = p - 1
    factors = {f for f in range(2, order + 1) if order % f == 0 and is_prime(f)}
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def dlog_table(p: int) -> dict[int, int]:
    """Map n -> k with g**k == n (mod p), for the smallest primitive root g."""
    g = primitive_root(p)
    table, x = {}, 1
    for k in range(p - 1):
        table[x] = k
        x = x * g % p
    return table


@dataclass(frozen=True)
class DirichletChar:
    """chi(g) = zeta_{p-1} ** exponent, g the smallest primitive root mod p."""

    p: int
    exponent: int

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "exponent", self.exponent % (self.p - 1))

    @property
    def generator(self) -> int:
        return primitive_root(self.p)

    @property
    def order(self) -> int:
        return self.p - 1

    @property
    def is_odd(self) -> bool:
        return self.exponent % 2 == 1

    @property
    def is_principal(self) -> bool:
        return self.exponent == 0

    def conjugate(self) -> "DirichletChar":
        return DirichletChar(self.p, -self.exponent)

    def __call__(self, n: int) -> Cyclo:
        return evaluate(self, n)

    def __repr__(self):
        return f"DirichletChar(p={self.p}, exponent={self.exponent})"


def evaluate(chi: DirichletChar, n: int) -> Cyclo:
    return _value(chi.p, chi.exponent, n % chi.p)


@lru_cache(maxsize=None)
def _value(p: int, t: int, r: int) -> Cyclo:
    if r == 0:
        return Cyclo.from_rational(0, p - 1)
    return Cyclo.zeta(p - 1, t * dlog_table(p)[r])


def principal_character(p: int) -> DirichletChar:
    return DirichletChar(p, 0)


def odd_characters(p: int) -> list[DirichletChar]:
    """The (p-1)/2 odd characters mod p, ordered by exponent."""
    _check_prime(p)
    if p == 2:
        return []
    return [DirichletChar(p, t) for t in range(1, p - 1, 2)]


@lru_cache(maxsize=None)
def _L0(p: int, t: int) -> Cyclo:
    chi = DirichletChar(p, t)
    total = Cyclo.from_rational(0, p - 1)
    for n in range(1, p):
        total = total + chi(n) * Fraction(p - 2 * n, 2 * p)
    return total


def L_at_zero(chi: DirichletChar) -> Cyclo:
    """L(0, chi) = sum_{n=0}^{p-1} chi(n) (1/2 - n/p) for non-principal chi."""
    if chi.is_principal:
        raise ValueError("L(0, chi) formula needs a non-principal character")
    return _L0(chi.p, chi.exponent)


@lru_cache(maxsize=None)
def _ell_residue(p: int, r: int) -> Fraction:
    if r == 0:
        return Fraction(0)
    total = Cyclo.from_rational(0, p - 1)
    for chi in odd_characters(p):
        total = total + chi(r) / L_at_zero(chi)
    try:
        return 2 * as_rational(total)
    except Irrational as exc:
        raise ArithmeticError(
            f"ell({p}, {r}) failed the rationality check: {exc}"
        ) from None


def ell(p: int, d: int) -> Fraction:
    """Rational value of 2 * sum over odd chi mod p of chi(d) / L(0, chi)."""
    _check_prime(p)
    return _ell_residue(p, d % p)


def orthogonality_sum(p: int, a: int, b: int) -> Cyclo:
    """sum over odd chi of chi(a) * conj(chi(b))."""
    total = Cyclo.from_rational(0, p - 1)
    for chi in odd_characters(p):
        total = total + chi(a) * chi(b).conjugate()
    return total


def character_matrix(p: int, indices) -> list[list[Cyclo]]:
    """Rows k, columns s: chi_s(a_k) over the odd characters."""
    chars = odd_characters(p)
    return [[chi(a) for chi in chars] for a in indices]
