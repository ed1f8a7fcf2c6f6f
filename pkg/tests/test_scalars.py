"""Exact scalar domain: Laurent polynomials in the central unit G."""

from fractions import Fraction

import pytest

from hatloop.errors import DomainMismatch, ParseError
from hatloop.scalars import ExpScalar, QGamma


def test_arithmetic():
    a = QGamma.monomial(2) + QGamma.monomial(-2, -1)
    b = QGamma.monomial(1)
    assert a * b == QGamma.monomial(3) - QGamma.monomial(-1)
    assert a - a == QGamma.zero()
    assert (b ** 4) * (b ** -4) == QGamma.one()


def test_monomial_inverse():
    m = QGamma.monomial(3, Fraction(2, 5))
    assert m * m.inv() == QGamma.one()
    with pytest.raises(DomainMismatch):
        (QGamma.one() + QGamma.monomial(1)).inv()


def test_format_parse():
    a = QGamma.monomial(2, Fraction(3, 2)) - QGamma.monomial(-2)
    assert QGamma.parse(a.format()) == a
    assert QGamma.parse("G^2 - G^-2") == \
        QGamma.monomial(2) - QGamma.monomial(-2)
    assert QGamma.parse("0") == QGamma.zero()
    with pytest.raises(ParseError):
        QGamma.parse("G^^2")


def test_as_rational():
    assert QGamma.from_rational(Fraction(7, 3)).as_rational() == \
        Fraction(7, 3)
    assert QGamma.monomial(1).as_rational() is None


def test_exp_scalar():
    lam = ExpScalar(QGamma.monomial(2), QGamma.from_rational(Fraction(1, 2)))
    assert lam * lam.inv() == ExpScalar.one()
    sq = lam * lam
    assert sq.unit == QGamma.monomial(4)
    assert sq.log == QGamma.from_rational(1)
