"""Exact rank computations and verdict records.

``rank`` is fraction-free (Bareiss) elimination over the integers after
clearing row denominators.  ``rank_mod`` is the fast pre-pass: a nonzero
r x r minor modulo a prime is nonzero over Q, so a modular rank is always
a certified lower bound for the rational rank.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import ceil, comb, gcd
from typing import Sequence

log = logging.getLogger(__name__)

__all__ = [
    "DIMENSIONS",
    "RatMatrix",
    "Verdict",
    "dim_table",
    "monomial_exponents",
    "monomial_matrix",
    "rank",
    "rank_bareiss",
    "rank_mod",
    "sturm_bound",
    "verify_dimension",
]

# dim M_k(Gamma_1(p)) for k = 2, 3 as tabulated; k = 1 is (p - 1)/2
DIMENSIONS = {
    2: {5: 3, 7: 5, 11: 10, 13: 13, 17: 20, 19: 24},
    3: {5: 4, 7: 7, 11: 15, 13: 20, 17: 32, 19: 39},
}

_DEFAULT_PRIMES = (2**61 - 1, 2**31 - 1, 1_000_000_007)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one claim check.

    ``status`` is "proved" (agreement through at least the Sturm bound),
    "checked" (agreement, but below the bound) or "failed".
    """

    claim: str
    anchor: str
    status: str
    order: object
    sturm: int | None = None
    failure: tuple | None = None
    note: str = ""

    @classmethod
    def ok(cls, claim, anchor, order, sturm, note="") -> "Verdict":
        proved = sturm is not None and order >= sturm
        return cls(claim, anchor, "proved" if proved else "checked", order, sturm, None, note)

    @classmethod
    def failed(cls, claim, anchor, at, lhs, rhs, order, sturm, note="") -> "Verdict":
        return cls(claim, anchor, "failed", order, sturm, (at, lhs, rhs), note)

    @classmethod
    def from_series(cls, claim, anchor, lhs, rhs, order, sturm, note="") -> "Verdict":
        from .qseries import first_mismatch

        mm = first_mismatch(lhs, rhs)
        if mm is not None:
            return cls.failed(claim, anchor, mm[0], mm[1], mm[2], order, sturm, note)
        reached = min(lhs.prec, rhs.prec) - 1
        if reached < order:
            return cls(claim, anchor, "checked", reached, sturm, None,
                       (note + "; " if note else "") + "precision below requested order")
        return cls.ok(claim, anchor, order, sturm, note)

    @property
    def passed(self) -> bool:
        return self.status != "failed"

    @property
    def proved(self) -> bool:
        return self.status == "proved"

    def to_record(self) -> dict:
        rec = {
            "id": self.claim,
            "paper_anchor": self.anchor,
            "status": self.status,
            "order_checked": str(self.order),
            "sturm_bound": self.sturm,
        }
        if self.failure is not None:
            at, lhs, rhs = self.failure
            rec["first_failure"] = {"order": str(at), "lhs": str(lhs), "rhs": str(rhs)}
        if self.note:
            rec["note"] = self.note
        return rec

    def line(self) -> str:
        s = f"{self.status:8s} {self.claim}  [{self.anchor}]  order={self.order} sturm={self.sturm}"
        if self.failure is not None:
            at, lhs, rhs = self.failure
            s += f"  first failure at q^{at}: {lhs} != {rhs}"
        if self.note:
            s += f"  ({self.note})"
        return s


def sturm_bound(p: int, k) -> int:
    """Conservative Sturm bound ceil(k (p^2 - 1)/12) + 1 for Gamma_1(p);
    p = 1 means the full modular group, bound floor(k/12) + 1."""
    k = Fraction(k)
    if k <= 0:
        raise ValueError("weight must be positive")
    if p == 1:
        return int(k // 12) + 1
    return ceil(k * (p * p - 1) / 12) + 1


def dim_table(p: int, k: int) -> int:
    if k == 1 and p in DIMENSIONS[2]:
        return (p - 1) // 2
    try:
        return DIMENSIONS[k][p]
    except KeyError:
        raise ValueError(f"no dimension recorded for p={p}, k={k}") from None


class RatMatrix:
    """Dense matrix of Fractions/ints, stored row-major."""

    def __init__(self, rows: Sequence[Sequence]):
        self.entries = [list(r) for r in rows]
        self.nrows = len(self.entries)
        self.ncols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.ncols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def integer_rows(self) -> list[list[int]]:
        """Rows scaled by their common denominator (rank preserving)."""
        out = []
        for row in self.entries:
            den = 1
            for x in row:
                d = Fraction(x).denominator
                den = den * d // gcd(den, d)
            out.append([int(Fraction(x) * den) for x in row])
        return out

    def __repr__(self):
        return f"RatMatrix({self.nrows}x{self.ncols})"


def rank_mod(M: RatMatrix, prime: int) -> int:
    rows = [[x % prime for x in r] for r in M.integer_rows()]
    r = 0
    ncols = M.ncols
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, prime)
        pr = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv % prime
                ri = rows[i]
                for j in range(c, ncols):
                    if pr[j]:
                        ri[j] = (ri[j] - f * pr[j]) % prime
        r += 1
        if r == len(rows):
            break
    return r


def rank_bareiss(M: RatMatrix, progress_every: int = 0) -> tuple[int, list[int]]:
    """Exact rank and pivot rows (original row indices) by Bareiss elimination."""
    rows = M.integer_rows()
    order = list(range(len(rows)))
    ncols = M.ncols
    r = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        order[r], order[piv] = order[piv], order[r]
        pr = rows[r]
        p_rc = pr[c]
        for i in range(r + 1, len(rows)):
            ri = rows[i]
            f = ri[c]
            for j in range(c + 1, ncols):
                # exact by Sylvester's identity
                ri[j] = (p_rc * ri[j] - f * pr[j]) // prev
            ri[c] = 0
        # columns skipped earlier hold zeros below r; nothing to update there
        prev = p_rc
        pivots.append(order[r])
        r += 1
        if progress_every and r % progress_every == 0:
            log.info("bareiss: %d pivots after column %d", r, c)
        if r == len(rows):
            break
    return r, pivots


def rank(M: RatMatrix) -> int:
    """Exact rank over Q."""
    return rank_bareiss(M)[0]


def monomial_exponents(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree-k monomials in n variables, lexicographic
    order of the monomials x_{i1} x_{i2} ... x_{ik} with i1 <= ... <= ik."""
    out = []
    for combo in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomial_matrix(p: int, k: int, T: int | None = None, progress: bool = False) -> RatMatrix:
    """Row i: coefficients of q^0 .. q^(T-1) of the i-th degree-k monomial in
    the level-p generators."""
    from .generators import generator_series

    n = (p - 1) // 2
    if k not in (1, 2, 3):
        raise ValueError("weight must be 1, 2 or 3")
    exps = monomial_exponents(n, k)
    if T is None:
        T = len(exps)
    if T < len(exps):
        raise ValueError(f"need at least {len(exps)} columns, got T={T}")
    gens = [generator_series(p, j, T - 1).as_list(0, T) for j in range(1, n + 1)]
    gens = [list(g) + [0] * (T - len(g)) for g in gens]

    def mul(a, b):
        out = [0] * T
        bnz = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                lim = T - i
                for j, y in bnz:
                    if j >= lim:
                        break
                    out[i + j] += x * y
        return out

    cache: dict[tuple[int, ...], list[int]] = {}

    def series_of(combo: tuple[int, ...]) -> list[int]:
        if len(combo) == 1:
            return gens[combo[0]]
        hit = cache.get(combo)
        if hit is None:
            hit = mul(series_of(combo[:-1]), gens[combo[-1]])
            cache[combo] = hit
        return hit

    rows = []
    for i, combo in enumerate(combinations_with_replacement(range(n), k)):
        rows.append(series_of(combo))
        if progress and (i + 1) % 25 == 0:
            log.info("monomial_matrix p=%d k=%d: %d/%d rows", p, k, i + 1, len(exps))
    return RatMatrix(rows)


def verify_dimension(p: int, k: int, T: int | None = None, exact: bool = True) -> Verdict:
    """Rank of the degree-k monomial matrix against the tabulated dimension.

    A modular rank certifies rank >= r; the monomials lie in M_k, so the
    tabulated dimension bounds the rank from above.
    """
    claim = f"dims p={p} k={k}"
    anchor = "Thm lem:mod / eq:83"
    want = dim_table(p, k)
    M = monomial_matrix(p, k, T, progress=True)
    mod_ranks = [rank_mod(M, q) for q in _DEFAULT_PRIMES]
    lower = max(mod_ranks)
    log.info("dims p=%d k=%d: modular ranks %s", p, k, mod_ranks)
    note = f"rank {lower} (modular)"
    if exact:
        r, _ = rank_bareiss(M, progress_every=10)
        if r != lower:
            note = f"modular rank {lower} vs exact {r}"
            lower = max(lower, r)
        else:
            note = f"rank {r} (exact and modular agree)"
    if lower != want:
        return Verdict.failed(claim, anchor, "rank", lower, want, M.ncols, None, note)
    return Verdict("dims p=%d k=%d" % (p, k), anchor, "proved", M.ncols, None, None, note)
