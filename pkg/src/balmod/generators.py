"""Catalogue of the Gamma_0(p)-permuted weight-one generators.

For each prime 5 <= p <= 19 and each index a in the chosen lift set of
(Z/pZ)*/{+-1}, the catalogue (``data/generators.json``) records the theta
exponent vector b and the product display exactly as printed.  Rows whose
printed product disagrees with the theta vector carry an ``anomaly`` note
and a ``corrected`` product regenerated from b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd

from .eisenstein import Script, expand_eisenstein
from .exactnum import Cyclo, root_of_unity
from .linalg import Verdict, sturm_bound
from .qseries import (
    ProductSpec,
    QSeries,
    expand_product,
    expand_theta_constant,
    first_mismatch,
)

__all__ = [
    "GeneratorRecord",
    "GeneratorTable",
    "PermAction",
    "PRIMES",
    "catalogue_records",
    "dump_catalogue",
    "generator_series",
    "index_of",
    "load_catalogue",
    "perm_action",
    "scriptE_series",
    "table",
    "theta_product_spec",
    "theta_quotient_series",
    "verify_generator_equals_eisenstein",
    "verify_permutation_representation",
    "verify_theta_quotient",
]

PRIMES = (5, 7, 11, 13, 17, 19)

_DATA = "generators.json"


class CatalogueError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorRecord:
    p: int
    a: int
    theta: tuple[int, ...]
    theta_label: str
    display: dict
    anomaly: str | None = None
    corrected: dict | None = None

    @property
    def printed_spec(self) -> ProductSpec:
        return _spec_from_json(self.display)

    @property
    def spec(self) -> ProductSpec:
        """The product used for expansions (corrected where flagged)."""
        return _spec_from_json(self.corrected or self.display)

    @property
    def sign(self) -> int:
        return int(self.display.get("sign", 1))


def _spec_from_json(d: dict) -> ProductSpec:
    return ProductSpec(
        tuple(tuple(f) for f in d["factors"]),
        Fraction(d["q_prefix"]),
    )


def theta_product_spec(p: int, b) -> ProductSpec:
    """Product form of eta^3(p tau) * prod_k phi_{p,k}^{b_k} with phases removed.

    Requires the exponents of q and of (q^p; q^p) to come out integral.
    """
    b = tuple(b)
    if len(b) != (p - 1) // 2:
        raise CatalogueError(f"theta vector length {len(b)} != {(p - 1) // 2}")
    factors = []
    prefix = Fraction(p, 8)
    for k, e in enumerate(b, start=1):
        if e:
            m = 2 * k - 1
            factors.append(((p - m) // 2, p, e))
            factors.append(((p + m) // 2, p, e))
            prefix += Fraction(e * m * m, 8 * p)
    top = 3 + sum(b)
    if top:
        factors.append((p, p, top))
    return ProductSpec(tuple(factors), prefix)


def catalogue_records() -> list[dict]:
    text = resources.files("balmod.data").joinpath(_DATA).read_text()
    return json.loads(text)


def dump_catalogue(records: list[dict]) -> str:
    """Serialize records exactly as stored in the data file."""
    lines = ["["]
    for i, rec in enumerate(records):
        sep = "," if i + 1 < len(records) else ""
        lines.append("  " + json.dumps(rec, separators=(", ", ": ")) + sep)
    lines.append("]")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GeneratorTable:
    p: int
    indices: tuple[int, ...]
    records: tuple[GeneratorRecord, ...]

    @property
    def product_specs(self) -> tuple[ProductSpec, ...]:
        return tuple(r.spec for r in self.records)

    @property
    def theta_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r.theta for r in self.records)

    def record(self, a: int) -> GeneratorRecord:
        return self.records[self.indices.index(a)]


@lru_cache(maxsize=None)
def load_catalogue() -> dict[int, GeneratorTable]:
    by_p: dict[int, list[GeneratorRecord]] = {}
    for rec in catalogue_records():
        r = GeneratorRecord(
            p=rec["p"],
            a=rec["a"],
            theta=tuple(rec["theta"]),
            theta_label=rec.get("theta_label", f"T{rec['p']}"),
            display=rec["display"],
            anomaly=rec.get("anomaly"),
            corrected=rec.get("corrected"),
        )
        by_p.setdefault(r.p, []).append(r)
    out = {}
    for p, recs in by_p.items():
        recs.sort(key=lambda r: r.a)
        out[p] = GeneratorTable(p, tuple(r.a for r in recs), tuple(recs))
        _check_table(out[p])
    return out


def _check_table(t: GeneratorTable) -> None:
    p = t.p
    n = (p - 1) // 2
    if len(t.indices) != n:
        raise CatalogueError(f"p={p}: expected {n} generators")
    classes = {min(a % p, -a % p) for a in t.indices}
    if len(classes) != n or t.indices[0] != 1:
        raise CatalogueError(f"p={p}: indices are not a lift set of (Z/p)*/+-1")
    for r in t.records:
        if sum(r.theta) != -1:
            raise CatalogueError(f"p={p}, a={r.a}: theta exponents must sum to -1")


def table(p: int) -> GeneratorTable:
    try:
        return load_catalogue()[p]
    except KeyError:
        raise ValueError(f"no generator table for p = {p}") from None


def index_of(p: int, a: int) -> tuple[int, int]:
    """Return (k, sign) with <a> E_p = sign * (k-th generator), k 1-based."""
    t = table(p)
    r = a % p
    if r == 0:
        raise ValueError("a must be coprime to p")
    for k, b in enumerate(t.indices, start=1):
        if r == b % p:
            return k, 1
        if r == (-b) % p:
            return k, -1
    raise AssertionError("index set does not cover the residue")


def _check_index(p: int, k: int) -> None:
    n = (p - 1) // 2
    if not 1 <= k <= n:
        raise IndexError(f"generator index {k} out of range 1..{n} for p = {p}")


_series_cache: dict[tuple, QSeries] = {}


def generator_series(p: int, k: int, T: int) -> QSeries:
    """Product expansion of the k-th generator <a_k> E_p through q^T."""
    _check_index(p, k)
    key = ("gen", p, k)
    hit = _series_cache.get(key)
    if hit is not None and hit.prec >= T + 1:
        return hit.truncate(T + 1) if hit.prec > T + 1 else hit
    s = expand_product(table(p).records[k - 1].spec, T)
    _series_cache[key] = s
    return s


def scriptE_series(p: int, a: int, T: int) -> QSeries:
    """<a> E_p for any unit a, via the generator table and the sign rule."""
    k, sign = index_of(p, a)
    s = generator_series(p, k, T)
    return s if sign == 1 else -s


def theta_quotient_series(p: int, k: int, T: int, b=None) -> QSeries:
    """eta^3(p tau) prod exp(-pi i b_j (2j-1)/(2p)) phi_{p,j}^{b_j}, assembled
    from individual theta-constant expansions.

    The phase must cancel to exactly 1 and the result must be an integral
    series; anything else signals a transcription error.
    """
    _check_index(p, k)
    if b is None:
        b = table(p).records[k - 1].theta
    phase = Cyclo.from_rational(1, 8 * p)
    # every theta constant has valuation >= 0 and starts with coefficient 1,
    # so inverting costs no precision beyond the q-shift
    margin = 2 * (p + 1)
    result = QSeries.one(T + 1 + margin)
    eta3 = expand_product(ProductSpec(((p, p, 3),), Fraction(p, 8)), T + margin)
    result = result * eta3
    for j, e in enumerate(b, start=1):
        if not e:
            continue
        ph, ser = expand_theta_constant(p, j, T + margin)
        normaliser = root_of_unity(Fraction(-e * (2 * j - 1), 4 * p)).lift(8 * p)
        phase = phase * normaliser * ph.lift(8 * p) ** e
        result = result * (ser**e)
    if phase != 1:
        raise CatalogueError(f"p={p}, k={k}: theta quotient phase {phase!r} != 1")
    result = result.compact()
    if not result.is_integral():
        raise CatalogueError(f"p={p}, k={k}: theta quotient is not integral")
    if result.prec < T + 1:
        raise CatalogueError("insufficient working precision for theta quotient")
    return result.truncate(T + 1).regrade(min(result.offset, 0), 1)


# ----------------------------------------------------------------------------
# permutation action


@dataclass(frozen=True)
class PermAction:
    """k -> (k', sign) with d * a_k == sign * a_{k'} (mod p)."""

    p: int
    d: int
    mapping: tuple[tuple[int, int], ...]  # index k-1 -> (k', sign)

    def __call__(self, k: int) -> tuple[int, int]:
        return self.mapping[k - 1]

    @property
    def permutation(self) -> tuple[int, ...]:
        return tuple(kk for kk, _ in self.mapping)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.mapping)

    def compose(self, other: "PermAction") -> "PermAction":
        """self after other: k -> other(k) -> self(other(k))."""
        if self.p != other.p:
            raise ValueError("level mismatch")
        out = []
        for k2, s2 in other.mapping:
            k3, s3 = self.mapping[k2 - 1]
            out.append((k3, s2 * s3))
        return PermAction(self.p, self.d * other.d % self.p, tuple(out))

    def __eq__(self, other):
        if not isinstance(other, PermAction):
            return NotImplemented
        return self.p == other.p and self.mapping == other.mapping

    def __hash__(self):
        return hash((self.p, self.mapping))


def perm_action(p: int, d: int) -> PermAction:
    if d % p == 0:
        raise ValueError("d must be a unit mod p")
    t = table(p)
    return PermAction(p, d % p, tuple(index_of(p, d * a) for a in t.indices))


# ----------------------------------------------------------------------------
# verification


def verify_generator_equals_eisenstein(
    p: int, k: int, T: int, spec: ProductSpec | None = None
) -> Verdict:
    """Compare the product expansion with the divisor-sum expansion."""
    _check_index(p, k)
    a = table(p).indices[k - 1]
    claim = f"sf/gtd p={p} a={a}"
    lhs = expand_product(spec, T) if spec is not None else generator_series(p, k, T)
    rhs = expand_eisenstein(Script(p, a), T)
    return Verdict.from_series(claim, "Thm sf / Thm gtd", lhs, rhs, T, sturm_bound(p, 1))


def verify_permutation_representation(p: int, T: int) -> Verdict:
    """Group law for the signed action plus the series form of the rule
    <d>(<a_k> E_p) = sign * <a_k'> E_p through order T."""
    claim = f"pmr p={p}"
    anchor = "Thm pmr / eq:71"
    units = [d for d in range(1, p)]
    acts = {d: perm_action(p, d) for d in units}
    for d in units:
        for e in units:
            if acts[d].compose(acts[e]) != acts[d * e % p]:
                return Verdict.failed(claim, anchor, 0, f"perm({d})perm({e})", f"perm({d*e % p})", T, sturm_bound(p, 1))
    indices = table(p).indices
    for d in units:
        act = acts[d]
        for k, a in enumerate(indices, start=1):
            kk, sign = act(k)
            lhs = expand_eisenstein(Script(p, d * a), T)
            rhs = generator_series(p, kk, T)
            rhs = rhs if sign == 1 else -rhs
            mm = first_mismatch(lhs, rhs)
            if mm is not None:
                return Verdict.failed(claim, anchor, mm[0], mm[1], mm[2], T, sturm_bound(p, 1))
    return Verdict.ok(claim, anchor, T, sturm_bound(p, 1))


def verify_theta_quotient(p: int, k: int, T: int) -> Verdict:
    """Theta-quotient row k against the product expansion, both as formal
    products and as series through q^T."""
    _check_index(p, k)
    rec = table(p).records[k - 1]
    claim, anchor = f"gtd1 p={p} a={rec.a}", "Thm gtd1"
    sb = sturm_bound(p, 1)
    if sum(rec.theta) != -1:
        return Verdict.failed(claim, anchor, "weight", sum(rec.theta), -1, T, sb)
    want, got = rec.spec, theta_product_spec(p, rec.theta)
    if want.q_prefix != got.q_prefix or want.exponent_map(p) != got.exponent_map(p):
        return Verdict.failed(claim, anchor, "product", got.exponent_map(p),
                              want.exponent_map(p), T, sb)
    try:
        lhs = theta_quotient_series(p, k, T)
    except CatalogueError as exc:
        return Verdict.failed(claim, anchor, "phase", str(exc), 1, T, sb)
    note = f"{rec.theta_label}{list(rec.theta)}"
    if rec.anomaly:
        note += "; " + rec.anomaly
    return Verdict.from_series(claim, anchor, lhs, generator_series(p, k, T), T, sb, note)
