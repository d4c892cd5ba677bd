"""Acceptance suite: one PASS/FAIL line per criterion.

Run with pytest (lines appear in the terminal summary) or directly:
    python tests/test_acceptance.py
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from balmod.characters import ell, orthogonality_sum
from balmod.eisenstein import Classical, expand_eisenstein
from balmod.exactnum import Cyclo, as_rational, euler_phi
from balmod.generators import (
    PRIMES, index_of, table, verify_generator_equals_eisenstein, verify_theta_quotient,
)
from balmod.linalg import DIMENSIONS, verify_dimension
from balmod.qseries import ProductSpec, QSeries, expand_product, first_mismatch, q_derive
from balmod.thetarep import verify_gamma0_words, verify_level5_matrices, verify_psl2_relations
from balmod.verifier import (
    catalogue, check_entry, check_identity, fit_deqx_monomial, get_identity, klein_coefficient_check,
    negative_control, tcore_direct, verify_diffsys, verify_diffsys_invariance, verify_diffsys_P,
    verify_tcore,
)

RESULTS = {}


def _gens(p):
    return range(1, (p + 1) // 2)


def criterion_1():
    bad = [v.line() for p in PRIMES for k in _gens(p)
           if not (v := verify_generator_equals_eisenstein(p, k, 300)).proved]
    return not bad, "33 generators equal divisor sums through q^300" if not bad else bad[0]


def criterion_2():
    vs = [verify_theta_quotient(p, k, 300) for p in PRIMES for k in _gens(p)]
    bad = [v.line() for v in vs if not v.proved]
    flagged = sorted((v.claim for v in vs if "regenerated" in v.note))
    label = table(13).records[index_of(13, 4)[0] - 1].theta_label
    ok = not bad and flagged == ["gtd1 p=13 a=3", "gtd1 p=19 a=4"] and label == "T11"
    return ok, (f"33 theta quotients exact; printed products regenerated for {', '.join(flagged)}; "
                f"row <4>E_13 labelled {label}, matches as T13") if ok else (bad or flagged)


def criterion_3():
    ranks = {}
    for k in (2, 3):
        for p in PRIMES:
            v = verify_dimension(p, k)
            ranks[(p, k)] = v.proved
    bad = [pk for pk, ok in ranks.items() if not ok]
    return not bad, ("ranks " + str(tuple(DIMENSIONS[2].values())) + " and "
                     + str(tuple(DIMENSIONS[3].values())) + " (exact)") if not bad else f"failed at {bad}"


def criterion_4():
    bad = [v.line() for p in PRIMES if not (v := verify_tcore(p, 60)).proved]
    from test_verifier import brute_cores

    spot = tcore_direct(5, 5) == brute_cores(5, 5) == [1, 1, 2, 3, 5, 2]
    return not bad and spot, ("three-way agreement through n=60; c_5(0..5) = 1,1,2,3,5,2 "
                              "matches hook-length enumeration") if not bad else bad[0]


def criterion_5():
    vs = [verify_diffsys(p, a, 100) for p in PRIMES for a in table(p).indices]
    vs += [verify_diffsys_invariance(p, 100) for p in PRIMES]
    vs += [verify_diffsys_P(5, 100), verify_diffsys_P(7, 100)]
    vs += [check_identity(get_identity(i), 100) for i in
           ("deqa", "deqb", "deqx", "deqy", "deqz", "rdiff1 E2", "rdiff1 E4", "rdiff1 E6")]
    bad = [v.line() for v in vs if not v.proved]
    fits = fit_deqx_monomial(100)
    holds = sorted(m for m, v in fits.items() if v.proved)
    ok = not bad and holds == ["xy"]
    return ok, (f"33 equations, invariance, both P-equations through q^100; "
                f"deqx cross term resolved as 52{holds[0]}") if ok else (bad[:1] or holds)


def criterion_6():
    vs = [check_entry(i) for i in catalogue()]
    vs += klein_coefficient_check(50)
    bad = [v.line() for v in vs if not v.proved]
    return not bad, f"{len(vs)} catalogue and Klein claims proved at their Sturm bounds" if not bad else bad[0]


def criterion_7():
    vs = verify_level5_matrices() + [verify_psl2_relations(N) for N in PRIMES]
    vs += [verify_gamma0_words(p, 20) for p in PRIMES]
    bad = [v.line() for v in vs if not v.proved]
    return not bad, "level-5 matrices, PSL2 relations, >= 20 Gamma_0 words per prime" if not bad else bad[0]


def _random_cyclo(rng, m):
    return Cyclo.from_rationals(m, [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(euler_phi(m))])


def _random_series(rng, n=15):
    return QSeries([rng.randint(-5, 5) for _ in range(n)], n + rng.randint(0, 2), rng.randint(0, 2))


def criterion_8():
    rng = random.Random(2024)
    checks = {}
    ok = True
    for m in (4, 8, 12, 16, 18, 40, 152):
        for _ in range(3):
            a, b, c = (_random_cyclo(rng, m) for _ in range(3))
            ok &= (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
            ok &= a.is_zero() or a * a.inverse() == Cyclo.from_rational(1, m)
    checks["field axioms"] = ok
    ok = True
    for _ in range(20):
        f, g, h = (_random_series(rng) for _ in range(3))
        ok &= first_mismatch(f * g, g * f) is None and first_mismatch((f * g) * h, f * (g * h)) is None
        ok &= first_mismatch(f * (g + h), f * g + f * h) is None
        ok &= first_mismatch(q_derive(f * g), q_derive(f) * g + f * q_derive(g)) is None
    checks["ring axioms and derivation"] = ok
    E4, E6 = (expand_eisenstein(Classical(k), 40) for k in (4, 6))
    eta24 = expand_product(ProductSpec(((1, 1, 24),), 1), 40).scale(1728)
    checks["E4^3 - E6^2 = 1728 eta^24"] = first_mismatch((E4 ** 3 - E6 ** 2).truncate(41), eta24) is None
    checks["ell odd and rational"] = all(
        isinstance(ell(p, d), Fraction) and ell(p, -d) == -ell(p, d) for p in PRIMES for d in range(p))
    checks["orthogonality"] = all(
        as_rational(orthogonality_sum(p, a, b)) == ((p - 1) // 2 if a == b else -(p - 1) // 2 if (a + b) % p == 0 else 0)
        for p in PRIMES for a in range(1, p) for b in range(1, p))
    controls = [negative_control(get_identity(i), 0) for i in ("eq:10", "eq:86", "eq:111", "eq:24 E4")]
    failures = [check_identity(c).failure for c in controls]
    checks["negative controls fail"] = all(f is not None for f in failures)
    bad = [k for k, v in checks.items() if not v]
    orders = ", ".join(f"q^{f[0]}" for f in failures if f)
    return not bad, f"all property suites pass; controls fail at {orders}" if not bad else f"failed: {bad}"


CRITERIA = [
    (1, "generator product = divisor sum", criterion_1),
    (2, "theta-quotient table", criterion_2),
    (3, "rank certificates", criterion_3),
    (4, "t-core formulas", criterion_4),
    (5, "differential systems", criterion_5),
    (6, "quadratic and Klein catalogue", criterion_6),
    (7, "theta representation engine", criterion_7),
    (8, "property suites and negative controls", criterion_8),
]


def run_criterion(n, name, fn):
    t = time.time()
    ok, detail = fn()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n} ({name}): {detail}  [{time.time() - t:.1f}s]"
    RESULTS[n] = line
    return ok, line


@pytest.mark.parametrize("n,name,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, name, fn):
    ok, line = run_criterion(n, name, fn)
    print(line)
    assert ok, line


if __name__ == "__main__":
    status = 0
    for n, name, fn in CRITERIA:
        ok, line = run_criterion(n, name, fn)
        print(line, flush=True)
        status |= not ok
    sys.exit(status)
