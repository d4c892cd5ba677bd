from fractions import Fraction

import pytest

from balmod.characters import DirichletChar
from balmod.eisenstein import (
    Classical, Scaled, Script, Twisted, bernoulli, divisors_upto, expand_eisenstein, twisted_weight2_principal,
)
from balmod.generators import PRIMES
from balmod.qseries import first_mismatch, q_derive


def test_bernoulli():
    assert [bernoulli(n) for n in (0, 1, 2, 4, 6, 12)] == [1, Fraction(-1, 2), Fraction(1, 6),
                                                          Fraction(-1, 30), Fraction(1, 42),
                                                          Fraction(-691, 2730)]


def test_classical_normalisation():
    assert expand_eisenstein(Classical(2), 3).as_list() == [1, -24, -72, -96]
    assert expand_eisenstein(Classical(4), 2).as_list() == [1, 240, 2160]
    assert expand_eisenstein(Classical(6), 2).as_list() == [1, -504, -16632]


def test_ramanujan_system():
    E2, E4, E6 = (expand_eisenstein(Classical(k), 60) for k in (2, 4, 6))
    for lhs, rhs in ((q_derive(E2).scale(12), E2 * E2 - E4),
                     (q_derive(E4).scale(3), E2 * E4 - E6),
                     (q_derive(E6).scale(2), E2 * E6 - E4 * E4)):
        assert first_mismatch(lhs, rhs) is None


def test_script_level5():
    assert expand_eisenstein(Script(5, 1), 2).as_list() == [1, 3, 4]
    s = expand_eisenstein(Script(5, 2), 3)
    assert s.valuation() == 1 and s[1] == 1


def test_twisted_weight_one():
    # odd character, weight 1: the level-5 quadratic-free series has integral q coefficient
    s = expand_eisenstein(Twisted(DirichletChar(5, 1), 1), 5)
    assert s[0] == 1
    with pytest.raises(ValueError):
        Twisted(DirichletChar(5, 1), 2)


def test_weight_two_principal():
    s = twisted_weight2_principal(5, 6, 5)
    assert s[1] == 6 and s[5] == 6
    assert twisted_weight2_principal(7, 4, 1)[1] == 4
    assert twisted_weight2_principal(13, 2, 1)[1] == 2


def test_scaled():
    s = expand_eisenstein(Scaled(Classical(2), 11), 22)
    assert s[11] == -24 and s[22] == -72 and s[1] == 0


@pytest.mark.parametrize("p", PRIMES)
def test_script_integral_and_symmetric(p):
    for a in range(1, p):
        s = expand_eisenstein(Script(p, a), 40)
        assert s.is_integral()
        assert s[0] == (1 if a == 1 else -1 if a == p - 1 else 0)
        # <-a> acts by -1 on weight one
        assert first_mismatch(s, -expand_eisenstein(Script(p, p - a), 40)) is None


def test_divisors():
    assert divisors_upto(12)[12] == (1, 2, 3, 4, 6, 12)
