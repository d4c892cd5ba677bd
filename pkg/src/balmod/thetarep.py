"""Projective matrices of the theta-constant representation pi_N of
PSL(2, Z), exact in Q(zeta_{8N}).

Vector position l (1 <= l <= (N-1)/2) carries the characteristic
(N - 2l)/N, i.e. the theta constant of index k = (N + 1)/2 - l.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exactnum import Cyclo, root_of_unity

__all__ = [
    "ModularWord",
    "NotMonomial",
    "ProjMatrix",
    "eval_word",
    "gamma0_library",
    "induced_generator_permutation",
    "matrix_of_word",
    "monomial_structure",
    "perm_table",
    "pi_generator",
    "position_class",
    "root_exponent",
    "verify_gamma0_words",
    "verify_level5_matrices",
    "verify_psl2_relations",
    "word_for_matrix",
]


class NotMonomial(ValueError):
    pass


def _zeta(N: int, r: Fraction) -> Cyclo:
    """e^{pi i r} inside Q(zeta_{8N})."""
    return root_of_unity(Fraction(r) / 2).lift(8 * N)


class ProjMatrix:
    """Square matrix over Q(zeta_{8N}) modulo nonzero scalars."""

    def __init__(self, N: int, rows):
        self.N = N
        self.rows = [list(r) for r in rows]
        self.size = len(self.rows)
        if all(x.is_zero() for r in self.rows for x in r):
            raise ValueError("the zero matrix has no projective class")

    @classmethod
    def identity(cls, N: int) -> "ProjMatrix":
        n = (N - 1) // 2
        one, zero = Cyclo.from_rational(1, 8 * N), Cyclo.from_rational(0, 8 * N)
        return cls(N, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Cyclo:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "ProjMatrix") -> "ProjMatrix":
        if self.N != other.N:
            raise ValueError("level mismatch")
        n = self.size
        cols = [[other.rows[k][j] for k in range(n)] for j in range(n)]
        out = []
        for r in self.rows:
            nz = [(k, x) for k, x in enumerate(r) if not x.is_zero()]
            row = []
            for col in cols:
                acc = Cyclo.from_rational(0, 8 * self.N)
                for k, x in nz:
                    y = col[k]
                    if not y.is_zero():
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return ProjMatrix(self.N, out)._normalised()

    def scale_columns(self, d: list[Cyclo]) -> "ProjMatrix":
        """self @ diag(d)."""
        return ProjMatrix(self.N, [[x * c for x, c in zip(r, d)] for r in self.rows])

    def scale(self, c) -> "ProjMatrix":
        return ProjMatrix(self.N, [[x * c for x in r] for r in self.rows])

    def _normalised(self) -> "ProjMatrix":
        # divide by the first nonzero entry to keep coefficients small
        lead = self.first_nonzero()
        inv = lead.inverse()
        return ProjMatrix(self.N, [[x * inv for x in r] for r in self.rows])

    def first_nonzero(self) -> Cyclo:
        for r in self.rows:
            for x in r:
                if not x.is_zero():
                    return x
        raise AssertionError("unreachable")

    def proj_equal(self, other: "ProjMatrix") -> bool:
        """Cross-multiply by the first nonzero entries and compare."""
        if self.size != other.size:
            return False
        a, b = self.first_nonzero(), other.first_nonzero()
        for r1, r2 in zip(self.rows, other.rows):
            for x, y in zip(r1, r2):
                if x * b != y * a:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        return self.proj_equal(other)

    __hash__ = None

    def __repr__(self):
        return f"ProjMatrix(N={self.N}, size={self.size})"


@dataclass(frozen=True)
class ModularWord:
    """Letters from {"S", "T", "t"}, with t = T^-1; applied left to right."""

    letters: str

    def __post_init__(self):
        if set(self.letters) - set("STt"):
            raise ValueError(f"bad letter in word {self.letters!r}")

    @classmethod
    def parse(cls, text: str) -> "ModularWord":
        """Accept forms like 'TST^2ST^3S' or 'T^-1S'."""
        out, i = [], 0
        while i < len(text):
            ch = text[i]
            if ch not in "STt":
                raise ValueError(f"bad letter {ch!r}")
            i += 1
            power = 1
            if i < len(text) and text[i] == "^":
                j = i + 1
                if j < len(text) and text[j] == "-":
                    j += 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                power = int(text[i + 1:j])
                i = j
            if ch == "t":
                ch, power = "T", -power
            if ch == "S":
                out.append("S" * (power % 2))
            else:
                out.append(("T" if power > 0 else "t") * abs(power))
        return cls("".join(out))

    def __str__(self):
        return self.letters


def pi_generator(N: int, g: str) -> ProjMatrix:
    """pi_N(S) with the 1/sqrt(iN) scalar dropped, or pi_N(T)."""
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and at least 3")
    n = (N - 1) // 2
    zero = Cyclo.from_rational(0, 8 * N)
    if g == "T":
        return ProjMatrix(N, [[_zeta(N, Fraction((N - 2 * l) ** 2, 4 * N)) if l == j else zero
                               for j in range(1, n + 1)] for l in range(1, n + 1)])
    if g == "S":
        rows = []
        for l in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                a = 1 + _zeta(N, Fraction((2 * j - N) * (N - 2 * l), N))
                b = _zeta(N, Fraction(j * (-2 * N + 4 * l + 2) + N * N - 2 * (N + 1) * l, 2 * N))
                row.append(a * b)
            rows.append(row)
        return ProjMatrix(N, rows)
    raise ValueError(f"unknown generator {g!r}")


def _T_diag(N: int, power: int) -> list[Cyclo]:
    n = (N - 1) // 2
    return [_zeta(N, Fraction(power * (N - 2 * l) ** 2, 4 * N)) for l in range(1, n + 1)]


def eval_word(N: int, w) -> ProjMatrix:
    """Ordered product of generator images (T runs as diagonal scalings)."""
    if isinstance(w, str):
        w = ModularWord.parse(w)
    S = pi_generator(N, "S")
    M = ProjMatrix.identity(N)
    letters, i = w.letters, 0
    while i < len(letters):
        ch = letters[i]
        if ch == "S":
            M = M @ S
            i += 1
            continue
        j, power = i, 0
        while j < len(letters) and letters[j] in "Tt":
            power += 1 if letters[j] == "T" else -1
            j += 1
        if power:
            M = M.scale_columns(_T_diag(N, power))
        i = j
    return M


def monomial_structure(M: ProjMatrix) -> tuple[tuple[int, ...], tuple[Cyclo, ...]]:
    """(sigma, phases) with row l nonzero only in column sigma[l] (0-based);
    phases are the entries divided by the first one."""
    sigma, vals = [], []
    for r in M.rows:
        nz = [j for j, x in enumerate(r) if not x.is_zero()]
        if len(nz) != 1:
            raise NotMonomial(f"row has {len(nz)} nonzero entries")
        sigma.append(nz[0])
        vals.append(r[nz[0]])
    if sorted(sigma) != list(range(M.size)):
        raise NotMonomial("column used twice")
    lead = vals[0].inverse()
    return tuple(sigma), tuple(v * lead for v in vals)


def root_exponent(c: Cyclo, N: int) -> Fraction | None:
    """r in [0, 2) with c = e^{pi i r}, or None if c is not such a root."""
    m = 8 * N
    for k in range(m):
        if c == Cyclo.zeta(m, k):
            return Fraction(2 * k, m)
    return None


# ----------------------------------------------------------------------------
# matrices and words

_MAT = {"S": (0, -1, 1, 0), "T": (1, 1, 0, 1), "t": (1, -1, 0, 1)}


def matrix_of_word(w) -> tuple[int, int, int, int]:
    if isinstance(w, str):
        w = ModularWord.parse(w)
    a, b, c, d = 1, 0, 0, 1
    for ch in w.letters:
        e, f, g, h = _MAT[ch]
        a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
    return a, b, c, d


def word_for_matrix(a: int, b: int, c: int, d: int) -> ModularWord:
    """A word in S, T, T^-1 equal to (a b; c d) in PSL(2, Z)."""
    if a * d - b * c != 1:
        raise ValueError("determinant must be 1")
    out = []
    while c != 0:
        k = a // c
        out.append(("T" if k > 0 else "t") * abs(k))
        out.append("S")
        a, b, c, d = c, d, -(a - k * c), -(b - k * d)
    # now +-(1 b'; 0 1)
    k = b * a
    out.append(("T" if k > 0 else "t") * abs(k))
    return ModularWord("".join(out))


def gamma0_library(p: int, per_residue: int = 3, seed: int = 0, bound: int = 4):
    """Random matrices of Gamma_0(p) with words, covering each lower-right
    residue class d mod p; yields (matrix, word)."""
    rng = random.Random(seed * 1000 + p)
    out = []
    for d0 in range(1, p):
        made = 0
        while made < per_residue:
            r = rng.randint(-bound, bound) or 1
            c = p * r
            d = d0 + p * rng.randint(-bound, bound)
            if gcd(c, d) != 1:
                continue
            # a d - b c = 1
            a = pow(d, -1, abs(c)) if abs(c) > 1 else 1
            b = (a * d - 1) // c
            if a * d - b * c != 1:
                continue
            M = (a, b, c, d)
            w = word_for_matrix(*M)
            out.append((M, w))
            made += 1
    return out


def position_class(N: int, l: int) -> int:
    """Residue class in (Z/N)*/{+-1} (least positive) of vector position l (0-based)."""
    m = N - 2 * (l + 1)
    return min(m % N, -m % N)


def perm_table(p: int, words=None):
    """Rows (d, class permutation, phase exponents) for Gamma_0(p) words."""
    if words is None:
        words = gamma0_library(p, per_residue=1)
    rows = []
    for M, w in words:
        sigma, phases = monomial_structure(eval_word(p, w))
        cls = {position_class(p, l): position_class(p, sigma[l]) for l in range(len(sigma))}
        rows.append((M[3] % p, tuple(sorted(cls.items())),
                     tuple(root_exponent(ph, p) for ph in phases), str(w)))
    rows.sort()
    return rows


def induced_generator_permutation(p: int, sigma) -> tuple[int, ...]:
    """Generator indices k -> k' with <gamma> E_{a_k} ~ E_{a_k'}, read off the
    theta vectors: position l of the theta vector moves to sigma[l]."""
    from .generators import table

    t = table(p)
    n = (p - 1) // 2
    by_vector = {r.theta: k for k, r in enumerate(t.records, start=1)}
    out = []
    for r in t.records:
        # theta index j sits at vector position n - j
        by_pos = [r.theta[n - 1 - l] for l in range(n)]
        moved = [0] * n
        for l in range(n):
            moved[sigma[l]] = by_pos[l]
        vec = tuple(moved[n - 1 - j] for j in range(n))
        if vec not in by_vector:
            raise NotMonomial("image is not a catalogued theta vector")
        out.append(by_vector[vec])
    return tuple(out)


def verify_gamma0_words(p: int, n_words: int = 20, seed: int = 0):
    """For sampled Gamma_0(p) words: pi_p(word) is monomial and the induced
    permutation of generators is perm_action(p, d), d the lower-right entry."""
    from .generators import perm_action
    from .linalg import Verdict

    per = -(-n_words // (p - 1))
    lib = gamma0_library(p, per_residue=per, seed=seed, bound=2)
    claim, anchor = f"pi_{p} on Gamma_0({p}) words", "Thm far / Thm pmr / eq:71"
    for M, w in lib:
        if matrix_of_word(w) not in (M, tuple(-x for x in M)):
            return Verdict.failed(claim, anchor, str(w), matrix_of_word(w), M, len(lib), None,
                                  "word does not evaluate to its matrix")
        try:
            sigma, _ = monomial_structure(eval_word(p, w))
            got = induced_generator_permutation(p, sigma)
        except NotMonomial as exc:
            return Verdict.failed(claim, anchor, str(w), "not monomial", str(exc), len(lib), None)
        want = perm_action(p, M[3]).permutation
        if got != want:
            return Verdict.failed(claim, anchor, f"d={M[3] % p}", got, want, len(lib), None, str(w))
    return Verdict(claim, anchor, "proved", len(lib), None, None,
                   f"{len(lib)} words, all residues d mod {p}")


# level-5 worked example: words for alpha, beta and their printed matrices,
# as exponents r of e^{pi i r} (None for a zero entry)
LEVEL5_WORDS = {"alpha": "TST^2ST^3S", "beta": "TST^3ST^2S"}
LEVEL5_PRINTED = {
    "alpha": ((None, Fraction(1, 20)), (Fraction(29, 20), None)),
    "beta": ((None, Fraction(1, 4)), (Fraction(5, 4), None)),
    "T": ((Fraction(9, 20), None), (None, Fraction(1, 20))),
}


def _printed_matrix(entries) -> ProjMatrix:
    zero = Cyclo.from_rational(0, 40)
    return ProjMatrix(5, [[zero if r is None else _zeta(5, r) for r in row] for row in entries])


def verify_level5_matrices():
    """pi_5 of the alpha and beta words and of T against the printed
    matrices, projectively."""
    from .linalg import Verdict

    out = []
    for name, entries in LEVEL5_PRINTED.items():
        word = LEVEL5_WORDS.get(name, name)
        got, want = eval_word(5, word), _printed_matrix(entries)
        claim = f"pi_5({name}) from {word}"
        if not got.proj_equal(want):
            out.append(Verdict.failed(claim, "eq:57 / eq:58", "matrix", got.rows, want.rows, 1, None))
        else:
            out.append(Verdict(claim, "eq:57 / eq:58", "proved", "exact", None, None, "projective"))
    return out


def verify_psl2_relations(N: int):
    """S^2 and (ST)^3 act as scalars."""
    from .linalg import Verdict

    one = ProjMatrix.identity(N)
    claim, anchor = f"PSL2 relations N={N}", "Thm far"
    for w in ("SS", "STSTST"):
        if not eval_word(N, w).proj_equal(one):
            return Verdict.failed(claim, anchor, w, "not scalar", "scalar", "exact", None)
    return Verdict(claim, anchor, "proved", "exact", None, None, "S^2 and (ST)^3 projectively trivial")
