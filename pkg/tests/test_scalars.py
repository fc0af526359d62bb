from fractions import Fraction

import pytest

from carnot.scalars import ScalarField, TowerInsufficient


def test_rational_arithmetic():
    f = ScalarField()
    a = f(Fraction(3, 2))
    b = f(2)
    assert str(a + b) == "7/2"
    assert str(a * b) == "3"
    assert (a - a).is_zero()
    assert a / b == f(Fraction(3, 4))


def test_sqrt2_canonical_form():
    f = ScalarField()
    s2 = f.sqrt(2)
    assert s2 * s2 == f(2)
    assert str(s2) == "sqrt(2)"
    assert str(s2.inverse()) == "1/2*sqrt(2)"
    # (1+sqrt2)(1-sqrt2) = -1
    assert (f(1) + s2) * (f(1) - s2) == f(-1)
    # canonical: equal values have equal representations
    assert f.sqrt(8) == f(2) * s2
    assert f.sqrt(Fraction(1, 2)) == s2 / f(2)


def test_sqrt_of_square_is_rational():
    f = ScalarField()
    assert f.sqrt(Fraction(9, 4)) == f(Fraction(3, 2))
    assert f.sqrt(0).is_zero()


def test_tower_products_and_inverse():
    f = ScalarField()
    s2, s3 = f.sqrt(2), f.sqrt(3)
    s6 = f.sqrt(6)
    assert s2 * s3 == s6
    x = f(1) + s2 + s3
    assert x * x.inverse() == f.one()


def test_division_by_zero():
    f = ScalarField()
    with pytest.raises(ZeroDivisionError):
        f(1) / f(0)


def test_sqrt_cap_and_nonrational_radicand():
    f = ScalarField(max_radicands=1)
    f.sqrt(2)
    with pytest.raises(TowerInsufficient):
        f.sqrt(3)
    g = ScalarField()
    with pytest.raises(TowerInsufficient):
        g.sqrt(g(1) + g.sqrt(2))


def test_parse_and_format_round_trip():
    f = ScalarField()
    for text in ("3/2", "-1/2*sqrt(2)", "1 + sqrt(2)", "0",
                 "2 - 3/4*sqrt(2)"):
        x = f.parse(text)
        assert f.parse(str(x)) == x
    assert f.parse("0.5") == f(Fraction(1, 2))
    assert f.parse("1/sqrt(2)") == f.sqrt(2) / 2


def test_negative_sqrt_rejected():
    f = ScalarField()
    with pytest.raises(ValueError):
        f.sqrt(-2)
