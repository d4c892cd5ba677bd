from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balmod.eisenstein import Classical, expand_eisenstein
from balmod.qseries import (
    ProductSpec, QSeries, SeriesError, expand_product, expand_theta_constant, first_mismatch, q_derive,
    series_from_record, subst_power,
)
from balmod.exactnum import root_of_unity

PREC = 12
coeff = st.integers(-9, 9)


@st.composite
def series(draw, prec=PREC):
    offset = draw(st.integers(0, 3))
    cs = draw(st.lists(coeff, min_size=prec, max_size=prec))
    return QSeries(cs, prec + offset, offset)


def same(f, g):
    return first_mismatch(f, g) is None and f.prec == g.prec


@settings(max_examples=50, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert same(f * g, g * f)
    assert same((f * g) * h, f * (g * h))
    assert same(f * (g + h), f * g + f * h)
    assert same(f + QSeries.zero(f.prec), f)


@settings(max_examples=50, deadline=None)
@given(series(), series())
def test_q_derive_is_a_derivation(f, g):
    assert same(q_derive(f * g), q_derive(f) * g + f * q_derive(g))


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=PREC, max_size=PREC))
def test_invert_twice(cs):
    f = QSeries([1] + cs, PREC + 1)
    assert same(f.invert().invert(), f)
    assert first_mismatch(f * f.invert(), QSeries.one(PREC + 1)) is None


def test_small_products():
    assert same(QSeries([1, 1], 10) * QSeries([1, -1], 10), QSeries([1, 0, -1], 10))
    geo = QSeries([1, -1], 10).invert()
    assert geo.as_list() == [1] * 10


def test_pentagonal():
    s = expand_product(ProductSpec(((1, 1, 1),)), 12)
    want = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}
    assert s.as_list(0, 13) == [want.get(n, 0) for n in range(13)]


def test_jacobi_cube():
    # (q;q)^3 = sum (-1)^n (2n+1) q^{n(n+1)/2}
    s = expand_product(ProductSpec(((1, 1, 2),)), 50) * expand_product(ProductSpec(((1, 1, 1),)), 50)
    want = [0] * 51
    n = 0
    while n * (n + 1) // 2 <= 50:
        want[n * (n + 1) // 2] = (-1) ** n * (2 * n + 1)
        n += 1
    assert s.as_list(0, 51) == want


def test_split_factor_agrees():
    a = ProductSpec(((1, 5, 5), (4, 5, 5), (1, 1, -2)))
    b = ProductSpec(((1, 5, 4), (1, 5, 1), (4, 5, 5), (1, 1, -1), (1, 1, -1)))
    assert same(expand_product(a, 40), expand_product(b, 40))


def test_level5_generator_products():
    e5 = expand_product(ProductSpec(((1, 1, 2), (1, 5, -5), (4, 5, -5))), 2)
    assert e5.as_list() == [1, 3, 4]
    e5b = expand_product(ProductSpec(((1, 1, 2), (2, 5, -5), (3, 5, -5)), 1), 1)
    assert e5b.valuation() == 1 and e5b[1] == 1
    inv = expand_product(ProductSpec(((1, 5, 5), (4, 5, 5))), 10).invert()
    assert (inv * expand_product(ProductSpec(((1, 1, 2),)), 10)).as_list(0, 3) == [1, 3, 4]


def test_q_derive_examples():
    assert q_derive(QSeries([1, 1, 1], 3)).as_list() == [0, 1, 2]
    f = q_derive(QSeries.monomial(1, Fraction(1, 5), 2))
    assert f[Fraction(1, 5)] == Fraction(1, 5)


def test_ramanujan_first():
    E2, E4 = (expand_eisenstein(Classical(k), 60) for k in (2, 4))
    res = q_derive(E2).scale(12) + E4 - E2 * E2
    assert res.is_zero() and res.prec == 61


def test_classical_cusp_form():
    E4, E6 = (expand_eisenstein(Classical(k), 40) for k in (4, 6))
    eta24 = expand_product(ProductSpec(((1, 1, 24),), 1), 40)
    assert same((E4 ** 3 - E6 ** 2).truncate(41), eta24.scale(1728))


def test_subst_power():
    assert subst_power(QSeries([1, -24], 2), 5).as_list(0, 6) == [1, 0, 0, 0, 0, -24]
    E2 = expand_eisenstein(Classical(2), 30)
    assert subst_power(E2, 11)[11] == -24
    f = expand_product(ProductSpec(((1, 1, 3),)), 20)
    lhs = subst_power(q_derive(f), 3)
    rhs = q_derive(subst_power(f, 3)).scale(Fraction(1, 3))
    assert same(lhs, rhs)


def test_theta_constants():
    ph, s = expand_theta_constant(5, 1, 10)
    assert ph == root_of_unity(Fraction(1, 20))
    assert s.valuation() == Fraction(1, 40)
    ph2, s2 = expand_theta_constant(5, 2, 10)
    assert ph2 == root_of_unity(Fraction(3, 20)) and s2.valuation() == Fraction(9, 40)


def test_record_roundtrip():
    s = expand_theta_constant(7, 2, 15)[1]
    assert same(series_from_record(s.to_json()), s)


def test_errors():
    with pytest.raises(SeriesError):
        expand_product(ProductSpec(((1, 1, 1),)), -1)
    with pytest.raises(SeriesError):
        ProductSpec(((0, 5, 1),))
    with pytest.raises(SeriesError):
        QSeries.zero(5).invert()
    assert QSeries([0, 1], 5).invert().valuation() == -1
