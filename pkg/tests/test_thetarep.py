from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balmod.exactnum import root_of_unity
from balmod.generators import perm_action
from balmod.thetarep import (
    ModularWord, NotMonomial, ProjMatrix, eval_word, gamma0_library, matrix_of_word, monomial_structure,
    pi_generator, root_exponent, verify_gamma0_words, verify_level5_matrices, verify_psl2_relations,
    word_for_matrix,
)

LEVELS = (5, 7, 11, 13, 17, 19)


def test_pi5_T():
    T = pi_generator(5, "T")
    assert T[0, 0] == root_of_unity(Fraction(9, 40)).lift(40)
    assert T[1, 1] == root_of_unity(Fraction(1, 40)).lift(40)
    assert T[0, 1].is_zero() and T[1, 0].is_zero()


def test_level5_printed_matrices():
    assert all(v.proved for v in verify_level5_matrices())


def test_alpha_is_a_transposition():
    sigma, phases = monomial_structure(eval_word(5, "TST^2ST^3S"))
    assert sigma == (1, 0)
    assert root_exponent(phases[1], 5) == Fraction(7, 5)
    assert monomial_structure(eval_word(5, "T"))[0] == (0, 1)


@pytest.mark.parametrize("N", LEVELS)
def test_psl2_relations(N):
    assert verify_psl2_relations(N).proved


def test_S_alone_is_not_monomial():
    with pytest.raises(NotMonomial):
        monomial_structure(pi_generator(7, "S"))


def test_word_parsing():
    assert ModularWord.parse("TST^2ST^3S").letters == "TSTTSTTTS"
    assert ModularWord.parse("T^-2S^3").letters == "ttS"
    with pytest.raises(ValueError):
        ModularWord.parse("TX")


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
def test_word_for_matrix_roundtrip(b, c, k):
    # (1+bc  b; c  1) times (1 k; 0 1) has determinant one
    a = 1 + b * c
    b, d = b + k * a, 1 + k * c
    M = matrix_of_word(word_for_matrix(a, b, c, d))
    assert M in ((a, b, c, d), (-a, -b, -c, -d))


def test_library_covers_residues():
    lib = gamma0_library(11, per_residue=2)
    assert {M[3] % 11 for M, _ in lib} == set(range(1, 11))
    assert all(M[2] % 11 == 0 for M, _ in lib)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_gamma0_words_permute_generators(p):
    v = verify_gamma0_words(p, 20)
    assert v.proved and v.order >= 20


def test_projective_equality():
    I = ProjMatrix.identity(7)
    assert I.proj_equal(I.scale(root_of_unity(Fraction(1, 8)).lift(56)))
    assert not I.proj_equal(pi_generator(7, "T"))


def test_generator_permutation_matches_for_a_known_word():
    from balmod.thetarep import induced_generator_permutation
    lib = gamma0_library(7, per_residue=1)
    for M, w in lib:
        sigma, _ = monomial_structure(eval_word(7, w))
        assert induced_generator_permutation(7, sigma) == perm_action(7, M[3]).permutation
