"""Exact Poisson brackets, coproducts, antipode, Frobenius shift."""

from fractions import Fraction

import pytest

from hatloop.errors import ParseError, UnsupportedGenerator
from hatloop.poisson import (
    PoissonPoly, antipode, bracket, bracket_gl1, bracket_sl2, coproduct,
    counit, frobenius, phi_inv_coeff, tensor_bracket,
)

P = PoissonPoly.parse


def test_parse_format_roundtrip():
    for text in ("h[1]", "G^2 - G^-2", "3/2 * L * h[-2]^2",
                 "-h[3] + 1/2 * k^-1 * xm[-1]", "0"):
        p = P(text)
        assert P(p.format()) == p


def test_parse_rejects_garbage():
    for bad in ("h[]", "h[1.5]", "q + h[1]", "h[1] ** 2", ""):
        with pytest.raises(ParseError):
            P(bad)


def test_bracket_h_h():
    assert bracket_gl1(P("h[1]"), P("h[-1]")).format() == "G^2 - G^-2"
    assert bracket_gl1(P("h[2]"), P("h[-2]")).format() == "G^4 - G^-4"
    # non-opposite modes commute
    assert bracket_gl1(P("h[1]"), P("h[2]")).is_zero()
    assert bracket_gl1(P("h[1]"), P("h[-2]")).is_zero()


def test_bracket_h_lambda():
    assert bracket_gl1(P("h[3]"), P("L")) == P("3 * L * h[3]")
    assert bracket_gl1(P("h[-2]"), P("L")) == P("-2 * L * h[-2]")


def test_gamma_is_central():
    for other in ("h[1]", "h[-4]", "L", "G^3"):
        assert bracket_gl1(P("G"), P(other)).is_zero()


def test_antisymmetry_and_leibniz():
    a, b = P("h[1] * h[2]"), P("L * h[-1]")
    assert bracket_gl1(a, b) == -bracket_gl1(b, a)
    c = P("h[-2]")
    lhs = bracket_gl1(a * c, b)
    rhs = bracket_gl1(a, b) * c + a * bracket_gl1(c, b)
    assert lhs == rhs


def test_jacobi_spot():
    a, b, c = P("h[1]"), P("h[-1]"), P("L")
    total = (bracket_gl1(a, bracket_gl1(b, c))
             + bracket_gl1(b, bracket_gl1(c, a))
             + bracket_gl1(c, bracket_gl1(a, b)))
    assert total.is_zero()


def test_sl2_k_relations():
    assert bracket_sl2(P("k"), P("xm[0]")) == P("2 * k * xm[0]")
    assert bracket_sl2(P("k"), P("xp[-1]")) == P("-2 * k * xp[-1]")
    assert bracket_sl2(P("k"), P("h[-2]")).is_zero()


def test_sl2_xm_h():
    assert bracket_sl2(P("xm[-1]"), P("h[-2]")) == \
        P("-4 * G^2 * xm[-3]")


def test_phi_inv():
    # phi^{-1} coefficients: expansion of k^{-1} e^{-h^-}
    assert phi_inv_coeff(0) == P("k^-1")
    assert phi_inv_coeff(1) == P("-k^-1 * h[-1]")


def test_coproduct_gl1():
    cp = coproduct(P("h[2]"))
    text = str(cp)
    assert "G^2" in text and "G^-2" in text  # h primitive up to G twists
    # grouplike generators
    assert counit(P("G^3")) == P("1")
    assert counit(P("h[1]")).is_zero()


def test_coproduct_hopf_compat_spot():
    a, b = P("h[1]"), P("h[-1]")
    lhs = coproduct(bracket_gl1(a, b))
    rhs = tensor_bracket(coproduct(a), coproduct(b))
    assert lhs == rhs


def test_antipode():
    assert antipode(P("h[2]")) == P("-h[2]")
    assert antipode(P("G^2")) == P("G^-2")
    with pytest.raises(UnsupportedGenerator):
        antipode(P("xm[1]"), algebra="sl2")


def test_frobenius():
    assert frobenius(P("h[2]"), 3) == P("3 * h[6]")
    assert frobenius(P("L"), 5) == P("L^5")
    assert frobenius(P("G"), 3) == P("G^3")
    with pytest.raises(ValueError):
        frobenius(P("h[1]"), 4)


def test_frobenius_is_poisson_up_to_ell_squared():
    for ell in (3, 5):
        a, b = P("h[2]"), P("h[-2]")
        lhs = bracket_gl1(frobenius(a, ell), frobenius(b, ell))
        rhs = frobenius(bracket_gl1(a, b), ell).scale(
            Fraction(ell * ell))
        assert lhs == rhs


def test_bracket_dispatch():
    assert bracket(P("h[1]"), P("h[-1]"), algebra="gl1") == \
        bracket_gl1(P("h[1]"), P("h[-1]"))
    with pytest.raises(ValueError):
        bracket(P("h[1]"), P("h[-1]"), algebra="gl3")
