import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from balmod.linalg import (
    DIMENSIONS, RatMatrix, Verdict, monomial_exponents, monomial_matrix, rank, rank_bareiss, rank_mod,
    sturm_bound, verify_dimension,
)
from balmod.qseries import QSeries


def test_sturm_bound():
    assert [sturm_bound(p, 1) for p in (5, 7, 11, 13, 17, 19)] == [3, 5, 11, 15, 25, 31]
    assert sturm_bound(7, 2) == 9 and sturm_bound(11, 4) == 41
    assert sturm_bound(1, 12) == 2


@st.composite
def matrices(draw):
    r, c = draw(st.integers(1, 7)), draw(st.integers(1, 7))
    base = draw(st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=r, max_size=r))
    # append combinations so that rank deficiency is common
    extra = draw(st.lists(st.tuples(st.integers(0, r - 1), st.integers(0, r - 1), st.integers(-3, 3)),
                          max_size=3))
    rows = base + [[base[i][j] + k * base[i2][j] for j in range(c)] for i, i2, k in extra]
    return rows


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_against_sympy(rows):
    want = sympy.Matrix(rows).rank()
    M = RatMatrix(rows)
    assert rank_bareiss(M)[0] == want == rank(M)
    assert rank_mod(M, 2**61 - 1) == want


def test_monomials():
    assert len(monomial_exponents(9, 3)) == 165
    assert len(monomial_exponents(2, 2)) == 3


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_weight_two_ranks(p):
    assert verify_dimension(p, 2).proved


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_weight_three_ranks(p):
    v = verify_dimension(p, 3)
    assert v.proved and str(DIMENSIONS[3][p]) in v.note


@pytest.mark.long
@pytest.mark.parametrize("p", [17, 19])
def test_weight_three_ranks_long(p):
    assert verify_dimension(p, 3).proved


def test_monomial_matrix_uses_absolute_exponents():
    # row for E_2^2 at level 5 starts at q^2
    M = monomial_matrix(5, 2)
    assert M[2, 0] == 0 and M[2, 1] == 0 and M[2, 2] == 1


def test_verdict_records():
    ok = Verdict.from_series("c", "a", QSeries([1, 2], 5), QSeries([1, 2], 5), 4, 3)
    assert ok.proved and set(ok.to_record()) == {"id", "paper_anchor", "status", "order_checked", "sturm_bound"}
    low = Verdict.from_series("c", "a", QSeries([1, 2], 5), QSeries([1, 2], 5), 4, 10)
    assert low.status == "checked"
    bad = Verdict.from_series("c", "a", QSeries([1, 2, 3], 5), QSeries([1, 2, 4], 5), 4, 3)
    assert bad.status == "failed" and bad.to_record()["first_failure"]["order"] == "2"
