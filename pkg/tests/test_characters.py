import random
from fractions import Fraction

import pytest

from balmod.characters import (
    DirichletChar, L_at_zero, character_matrix, ell, is_prime, odd_characters, orthogonality_sum,
    primitive_root,
)
from balmod.exactnum import Cyclo, as_rational
from balmod.generators import PRIMES, table
from balmod.linalg import RatMatrix, rank

ALL = (3,) + PRIMES


def test_level5_character_values():
    chi = DirichletChar(5, 1)
    assert primitive_root(5) == 2
    assert chi(2) == Cyclo.zeta(4)
    assert [chi(n) for n in range(5)] == [Cyclo.from_rational(0, 4), Cyclo.from_rational(1, 4),
                                          Cyclo.zeta(4), -Cyclo.zeta(4), Cyclo.from_rational(-1, 4)]
    assert chi(3) * DirichletChar(5, 3)(3) == Cyclo.from_rational(1, 4)


@pytest.mark.parametrize("p", ALL)
def test_odd_characters(p):
    chars = odd_characters(p)
    assert len(chars) == (p - 1) // 2
    assert all(chi.is_odd and chi(1) == Cyclo.from_rational(1, p - 1) for chi in chars)
    assert {c.conjugate() for c in chars} == set(chars)


@pytest.mark.parametrize("p", PRIMES)
def test_L_values(p):
    total = Cyclo.from_rational(0, p - 1)
    for chi in odd_characters(p):
        L = L_at_zero(chi)
        assert not L.is_zero()
        pair = L + L_at_zero(chi.conjugate())
        assert pair == pair.conjugate()
        total = total + L
    as_rational(total)  # the odd characters form a Galois-stable set


def test_ell_level5():
    assert [ell(5, d) for d in range(6)] == [0, 6, 2, -2, -6, 0]


@pytest.mark.parametrize("p", PRIMES)
def test_ell_odd_rational_periodic(p):
    rng = random.Random(p)
    for _ in range(20):
        d = rng.randrange(-500, 500)
        assert isinstance(ell(p, d), Fraction)
        assert ell(p, -d) == -ell(p, d)
        assert ell(p, d + p) == ell(p, d)


@pytest.mark.parametrize("p", PRIMES)
def test_orthogonality(p):
    h = (p - 1) // 2
    for a in range(1, p):
        for b in range(1, p):
            s = as_rational(orthogonality_sum(p, a, b))
            want = h if a == b else -h if (a + b) % p == 0 else 0
            assert s == want


@pytest.mark.parametrize("p", PRIMES)
def test_character_matrix_invertible(p):
    # invertible over Q(zeta) iff its Gram matrix with the conjugate is
    B = character_matrix(p, table(p).indices)
    n = len(B)
    gram = [[as_rational(sum((B[i][s] * B[j][s].conjugate() for s in range(n)),
                             Cyclo.from_rational(0, p - 1)))
             for j in range(n)] for i in range(n)]
    assert rank(RatMatrix(gram)) == n


def test_bad_modulus():
    assert not is_prime(21)
    with pytest.raises(ValueError):
        odd_characters(21)
