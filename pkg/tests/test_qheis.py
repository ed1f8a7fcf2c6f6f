"""q-Heisenberg PBW algebra, Frobenius images, semiclassical limits."""

import pytest
import sympy

from hatloop.errors import NotInCenter
from hatloop.poisson import PoissonPoly, bracket_gl1, frobenius
from hatloop.qheis import (
    QHeisenbergElement, commutator, fr_gamma, fr_h, fr_lambda,
    q_heisenberg_commutator, semiclassical_limit,
)

q = sympy.Symbol("q")


def test_h_commutator_is_central():
    c = commutator(QHeisenbergElement.h(1), QHeisenbergElement.h(-1))
    # [h_m, h_{-m}] is a Laurent polynomial in Gamma = q (no h's, no Lambda)
    assert all(key[0] == () and key[1] == 0 for key in c.terms)
    assert not c.is_zero()


def test_h_h_commute_unless_opposite():
    assert commutator(QHeisenbergElement.h(1),
                      QHeisenbergElement.h(2)).is_zero()
    assert commutator(QHeisenbergElement.h(2),
                      QHeisenbergElement.h(-3)).is_zero()


def test_lambda_weight():
    # Lambda h_m Lambda^{-1} = q^{...} h_m: the commutator is a multiple of h_m
    c = commutator(QHeisenbergElement.lam(), QHeisenbergElement.h(3))
    assert len(c.terms) == 1
    (hpart, lpow, gpow), _ = next(iter(c.terms.items()))
    assert hpart == ((3, 1),) and lpow == 1


def test_fr_images():
    x = fr_h(2, 3)
    ((hpart, lpow, gpow), coeff), = x.terms.items()
    assert hpart == ((6, 1),)
    assert sympy.simplify(coeff - 3 * (q - 1 / q)) == 0
    assert fr_lambda(5).terms == {((), 5, 0): 1}
    assert fr_gamma(3).terms == {((), 0, 3): 1}
    with pytest.raises(ValueError):
        fr_h(1, 6)


def test_semiclassical_matches_poisson():
    P = PoissonPoly.parse
    for ell in (3, 5):
        for m in (1, 2, 3):
            lhs = semiclassical_limit(q_heisenberg_commutator(m, -m, ell),
                                      ell)
            rhs = frobenius(bracket_gl1(P(f"h[{m}]"), P(f"h[{-m}]")), ell)
            assert lhs == rhs


def test_semiclassical_lambda_direction():
    ell = 3
    lhs = semiclassical_limit(commutator(fr_h(2, ell), fr_lambda(ell)), ell)
    rhs = frobenius(bracket_gl1(PoissonPoly.parse("h[2]"),
                                PoissonPoly.parse("L")), ell)
    assert lhs == rhs


def test_noncentral_rejected():
    with pytest.raises(NotInCenter):
        semiclassical_limit(fr_h(1, 3), 3)
