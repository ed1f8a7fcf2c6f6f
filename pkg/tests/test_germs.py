"""Laurent germ arithmetic: windows, splits, exp/log, Bell coefficients."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hatloop.errors import DomainMismatch, OneSidedError
from hatloop.germs import (
    LaurentGerm, bell_coeffs, coeff_at, derivative, germ_add, germ_exp,
    germ_log, germ_mul, rescale, residue, split_pm, truncate_ge,
    truncate_le, window,
)
from hatloop.scalars import EXACT, QGamma

W = window(-6, 6)


def g(d, **kw):
    return LaurentGerm.from_dict(d, **kw)


def test_add_cancellation():
    assert germ_add(g({1: 1, 2: 1}), g({1: -1})) == g({2: 1})


def test_add_identity():
    f = g({-2: 0.5, 3: 1j})
    assert germ_add(f, LaurentGerm.zero()) == f


def test_add_direct():
    assert germ_add(g({-1: 2}), g({-1: 3, 1: 1})) == g({-1: 5, 1: 1})


def test_add_domain_mismatch():
    exact = LaurentGerm.monomial(0, QGamma.one(), domain=EXACT)
    with pytest.raises(DomainMismatch):
        germ_add(exact, LaurentGerm.one())


def test_mul_inverse_monomials():
    assert germ_mul(g({-1: 1}), g({1: 1}), W) == LaurentGerm.one()


def test_mul_difference_of_squares():
    lhs = germ_mul(g({0: 1, 1: 1}), g({0: 1, 1: -1}), window(-4, 4))
    assert lhs == g({0: 1, 2: -1})


def test_mul_geometric_truncated():
    # (1 + z + z^2 + z^3)(1 - z) = 1 - z^4, and the window clips the tail.
    geo = g({0: 1, 1: 1, 2: 1, 3: 1})
    assert germ_mul(geo, g({0: 1, 1: -1}), window(0, 1)) == LaurentGerm.one()


def test_split_pm():
    plus, minus = split_pm(g({-2: 3, 0: 1, 1: 1}))
    assert plus == g({0: 1, 1: 1})
    assert minus == g({-2: 3})
    assert split_pm(LaurentGerm.zero()) == (LaurentGerm.zero(),
                                            LaurentGerm.zero())
    plus, minus = split_pm(g({-1: 1}))
    assert plus.is_zero() and minus == g({-1: 1})


def test_rescale():
    assert rescale(g({1: 1}), 2) == g({1: 2})
    assert rescale(g({-1: 1, 1: 1}), 3.0) == g({-1: 1 / 3, 1: 3.0})
    with pytest.raises(DomainMismatch):
        rescale(g({1: 1}), 0)


def test_derivative_residue_truncate():
    assert derivative(g({-1: 1})) == g({-2: -1})
    assert residue(g({-1: 3, 1: 1})) == 3
    assert truncate_ge(g({-1: 1, 0: 1, 1: 1}), 0) == g({0: 1, 1: 1})
    assert truncate_le(g({-1: 1, 0: 1, 1: 1}), -1) == g({-1: 1})
    assert coeff_at(g({5: 2j}), 5) == 2j
    assert coeff_at(g({5: 2j}), 4) == 0


def test_exp_basic():
    assert germ_exp(LaurentGerm.zero(), W) == LaurentGerm.one()
    e = germ_exp(g({1: 1}), window(0, 3))
    assert e == g({0: 1, 1: 1, 2: 0.5, 3: 1 / 6})


def test_log_roundtrip():
    f = g({-1: 1})
    back = germ_log(germ_exp(f, window(-5, 0)), window(-5, 0))
    assert back.allclose(f, 1e-12)


def test_exp_rejects_two_sided():
    with pytest.raises(OneSidedError):
        germ_exp(g({-1: 1, 1: 1}), W)


def test_log_rejects_bad_constant():
    with pytest.raises(DomainMismatch):
        germ_log(g({1: 1}), W)


def test_bell_coeffs():
    h1 = Fraction(3, 2)
    assert bell_coeffs([h1], +1, 2) == [1, h1, h1 * h1 / 2]
    h2 = Fraction(1, 3)
    assert bell_coeffs([h1, h2], +1, 2) == [1, h1, h1 * h1 / 2 + h2]
    assert bell_coeffs([h1, h2], -1, 0) == [1]


def test_json_roundtrip():
    f = g({-2: 1 + 2j, 0: -0.5})
    assert LaurentGerm.from_json(f.to_json()) == f
    e = LaurentGerm.monomial(1, QGamma.monomial(2, Fraction(3, 2)),
                             domain=EXACT)
    assert LaurentGerm.from_json(e.to_json()) == e


# ---------------------------------------------------------------------------
# property tests

coeffs = st.dictionaries(st.integers(-5, 5),
                         st.fractions(max_denominator=8), max_size=6)


def _exactify(d):
    return LaurentGerm.from_dict(
        {n: QGamma.from_rational(c) for n, c in d.items() if c},
        domain=EXACT)


@given(coeffs)
def test_residue_of_derivative_vanishes(d):
    assert residue(derivative(_exactify(d))) == QGamma.zero()


@given(coeffs)
def test_split_roundtrip(d):
    f = _exactify(d)
    plus, minus = split_pm(f)
    assert germ_add(plus, minus) == f
    assert minus.is_zero() or minus.n_max < 0


@given(coeffs, st.integers(1, 4), st.integers(1, 4))
def test_rescale_group_action(d, a, b):
    f = _exactify(d)
    ga = QGamma.from_rational(a)
    gb = QGamma.from_rational(b)
    assert rescale(f, ga * gb) == rescale(rescale(f, gb), ga)
    assert rescale(rescale(f, ga), ga.inv()) == f


@settings(max_examples=40)
@given(coeffs, coeffs, coeffs)
def test_mul_commutative_associative(d1, d2, d3):
    f, h, k = _exactify(d1), _exactify(d2), _exactify(d3)
    w = window(-10, 10)
    assert germ_mul(f, h, w) == germ_mul(h, f, w)
    assert (germ_mul(germ_mul(f, h, w), k, window(-5, 5))
            == germ_mul(f, germ_mul(h, k, w), window(-5, 5)))


@given(coeffs, coeffs)
def test_integration_by_parts(d1, d2):
    f, h = _exactify(d1), _exactify(d2)
    assert residue(germ_mul(f, derivative(h), window(-12, 12))) == \
        -residue(germ_mul(derivative(f), h, window(-12, 12)))
