from fractions import Fraction

import pytest

from balmod.generators import PRIMES, table
from balmod.verifier import (
    PolyIdentity, QuadraticForm, UnresolvableSymbol, catalogue, check_entry, check_identity,
    find_minor_substitutions, fit_deqx_monomial, get_identity, klein_coefficient_check, level_dictionary,
    negative_control, orbit, quadratic_form, resolve, symmetry_check, tcore_convolution, tcore_direct,
    univariate_rep, verify_diffsys, verify_diffsys_invariance, verify_diffsys_P, verify_tcore,
)


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def is_core(lam, t):
    conj = [sum(1 for part in lam if part > j) for j in range(lam[0])] if lam else []
    hooks = (lam[i] - j + conj[j] - i - 1 for i in range(len(lam)) for j in range(lam[i]))
    return all(h % t for h in hooks)


def brute_cores(t, N):
    return [sum(1 for lam in partitions(n) if is_core(lam, t)) for n in range(N + 1)]


def test_level_dictionaries():
    assert level_dictionary(7) == {"x": (2, 1), "y": (3, -1), "z": (1, 1)}
    assert level_dictionary(5) == {"A5": (2, 1), "B5": (1, 1)}


def test_resolve():
    assert resolve("E1_5", 2).as_list() == [1, 3, 4]
    assert first_terms(resolve("y", 3)) == first_terms(-resolve("E3_7", 3))
    with pytest.raises(UnresolvableSymbol):
        resolve("nonsense", 5)


def first_terms(s):
    return s.as_list(0, 3)


@pytest.mark.parametrize("ident", catalogue(), ids=[f"level{i.level}-{n}" for n, i in enumerate(catalogue())])
def test_catalogue_at_sturm_bound(ident):
    v = check_entry(ident)
    assert v.proved, v.line()
    assert v.order >= ident.sturm


def test_printed_misprints_fail_where_recorded():
    first = {i.id: check_identity(i).failure[0] for i in catalogue() if i.expect == "fails"}
    assert first == {"kg first as printed": 1, "kg1 as printed": 2,
                     "eq:120 second as printed": Fraction(29, 22),
                     "eq:113 relation 1 as printed": 2}


def test_level7_quadratic_relations_at_30():
    assert check_identity(get_identity("eq:86"), 30).proved
    assert check_identity(get_identity("eq:87"), 30).proved


def test_low_order_is_only_checked():
    assert check_identity(get_identity("eq:86"), 4).status == "checked"


@pytest.mark.parametrize("id", ["eq:10", "eq:86", "eq:111", "eq:114 relation 10", "eq:24 E4"])
def test_negative_controls(id):
    ident = get_identity(id)
    for which in range(len(ident.terms)):
        v = check_identity(negative_control(ident, which))
        assert v.status == "failed" and v.failure is not None


def test_sign_flip_control_fails_at_two():
    assert check_identity(negative_control(get_identity("eq:10"), 2)).failure[0] == 2


def test_orbits():
    imgs = orbit(get_identity("eq:111")) + orbit(get_identity("eq:111a"))
    assert len(imgs) == 10
    assert all(check_identity(i).proved for i in imgs)


def test_symmetry():
    assert symmetry_check(univariate_rep([1, 228, 494, -228, -1])).proved
    assert symmetry_check({(2, 0): 1, (0, 2): 3}).status == "failed"


def test_quadratic_forms():
    F5 = quadratic_form(5)
    assert (F5.coefficient(1, 1), F5.coefficient(1, 2), F5.coefficient(2, 2)) == (-5, 66, 7)
    for p in PRIMES:
        F = quadratic_form(p)
        assert F.n == (p - 1) // 2 and F.coefficient(1, 1) == -p


@pytest.mark.parametrize("p", PRIMES)
def test_diffsys(p):
    for a in table(p).indices:
        assert verify_diffsys(p, a, 100).proved
    assert verify_diffsys_invariance(p, 40).passed


def test_diffsys_argument_order():
    assert verify_diffsys(11, 2, 30).note == "arguments E2, -E7, -E5, -E1, E3"


def test_diffsys_negative_control():
    bad = QuadraticForm.from_text(5, "-5*x1^2 + 64*x1*x2 + 7*x2^2")
    v = verify_diffsys(5, 1, 50, form=bad)
    assert v.status == "failed"


def test_P_equations():
    assert verify_diffsys_P(5, 40).proved and verify_diffsys_P(7, 40).proved


def test_level7_cross_term_fit():
    fits = fit_deqx_monomial(40)
    assert fits["xy"].proved
    assert fits["xz"].status == fits["yz"].status == "failed"


def test_minor_substitutions():
    subs = find_minor_substitutions()
    assert len(subs) == 5
    assert ((1, 2, 5, 3, 4), (1, -1, 1, 1, 1)) in subs


def test_klein_coefficients():
    assert all(v.proved or v.status == "checked" for v in klein_coefficient_check(50))
    assert all(v.passed for v in klein_coefficient_check(50))


def test_tcore_values():
    assert tcore_direct(5, 5) == [1, 1, 2, 3, 5, 2]
    assert all(tcore_direct(t, 0) == [1] for t in range(1, 8))
    assert tcore_direct(7, 6) == [1, 1, 2, 3, 5, 7, 11]


@pytest.mark.parametrize("t,N", [(2, 14), (3, 14), (5, 16), (7, 14)])
def test_tcore_hook_oracle(t, N):
    assert tcore_direct(t, N) == brute_cores(t, N)


def test_tcore_convolution_examples():
    assert tcore_convolution(5, 1) == 1
    assert tcore_convolution(7, 6) == tcore_direct(7, 4)[4]
    assert tcore_convolution(19, 20) == tcore_direct(19, 5)[5]
    with pytest.raises(ValueError):
        tcore_convolution(19, 3)


@pytest.mark.parametrize("p", PRIMES)
def test_verify_tcore(p):
    assert verify_tcore(p, 40).proved


def test_weight_policy_for_quartics():
    q = get_identity("eq:119 first")
    assert (q.level, q.weight, q.sturm) == (11, 4, 41)


def test_unresolvable_identity():
    ident = PolyIdentity("junk", "none", "foo*bar", 5, 2)
    with pytest.raises(UnresolvableSymbol):
        check_identity(ident, 5)
