"""Extended group law, central cocycle, algebra pairing, Manin split."""

from fractions import Fraction

import pytest

from hatloop.errors import MembershipError
from hatloop.extgroup import (
    DoubleElement, ExtendedElement, HatAlgebraElement, bilinear_form,
    cocycle_residue, double_form, hat_inv, hat_mul, in_diagonal,
    in_twisted_diagonal, lie_bracket, manin_split, twisted_commutator,
)
from hatloop.germs import LaurentGerm, window
from hatloop.scalars import EXACT, ExpScalar, QGamma

W = window(-6, 6)


def q(c):
    return QGamma.from_rational(Fraction(c))


def eg(n, fdict, lam_exp=0, gamma_exp=0):
    f = LaurentGerm.from_dict({k: q(v) for k, v in fdict.items()},
                              domain=EXACT)
    lam = ExpScalar(QGamma.monomial(lam_exp))
    return ExtendedElement(n, f, lam, QGamma.monomial(gamma_exp))


A = eg(1, {-2: Fraction(1, 2), 1: 3}, lam_exp=2, gamma_exp=1)
B = eg(-1, {-1: 1, 2: Fraction(-2, 3)}, lam_exp=0, gamma_exp=-1)
C = eg(0, {1: 1}, lam_exp=-2, gamma_exp=1)
E = ExtendedElement.identity(EXACT)


def test_identity_and_inverse():
    assert hat_mul(A, E, W) == A
    assert hat_mul(E, A, W) == A
    assert hat_mul(A, hat_inv(A), W) == E
    assert hat_mul(hat_inv(B), B, W) == E


def test_associativity():
    assert hat_mul(hat_mul(A, B, W), C, W) == hat_mul(A, hat_mul(B, C, W), W)


def test_cocycle_residue():
    fa = LaurentGerm.from_dict({1: q(1)}, domain=EXACT)
    gb = LaurentGerm.from_dict({-1: q(2)}, domain=EXACT)
    assert cocycle_residue(fa, gb) == q(2)
    assert cocycle_residue(gb, fa) == q(-2)


def test_twisted_commutator_is_central():
    x = twisted_commutator(A, B, W, check=True)
    assert x.n == 0
    assert x.f.is_zero()
    assert x.gamma.is_one()


def ha(fdict, c=0, d=0):
    f = LaurentGerm.from_dict({k: q(v) for k, v in fdict.items()},
                              domain=EXACT)
    return HatAlgebraElement(f, q(c), q(d))


def test_lie_bracket_central_term():
    # [f, g] picks up the residue Res(g df) on the center
    x = ha({1: 1})
    y = ha({-1: 2})
    br = lie_bracket(x, y, W)
    assert br.f.is_zero()
    assert br.c == q(2)
    # d acts as z d/dz
    dgen = ha({}, d=1)
    assert lie_bracket(dgen, ha({3: 1}), W).f == \
        LaurentGerm.from_dict({3: q(3)}, domain=EXACT)


def test_bilinear_form():
    x = ha({2: 3, 0: 1}, c=1)
    y = ha({-2: Fraction(1, 3)}, d=2)
    assert bilinear_form(x, y) == bilinear_form(y, x) == q(3)


def test_manin_split():
    x = DoubleElement(ha({-1: 1, 2: 4}, c=1, d=2),
                      ha({-2: 3, 1: 1}, c=-1, d=0))
    h, k = manin_split(x)
    assert h + k == x
    assert in_twisted_diagonal(h)
    assert in_diagonal(k)
    # the two Lagrangian halves are isotropic for the split pairing
    assert double_form(h, h).is_zero()
    assert double_form(k, k).is_zero()
    assert not in_diagonal(h + h)
