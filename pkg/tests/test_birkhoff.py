"""Winding numbers and scalar / 2x2 factorization round trips."""

import random

import pytest

from hatloop.birkhoff import (
    LoopMatrix, birkhoff_matrix2, birkhoff_scalar, in_identity_component,
    log_coeffs, reciprocal_coeffs, winding_number,
)
from hatloop.errors import SingularLoop
from hatloop.germs import LaurentGerm, germ_exp, window

W = window(-8, 8)


def g(d):
    return LaurentGerm.from_dict(d)


def test_winding_monomials():
    for n in (-3, -1, 0, 2, 5):
        assert winding_number(LaurentGerm.monomial(n)) == n


def test_winding_shifted_zeros():
    # zero outside the unit circle does not wind, zero inside does
    assert winding_number(g({0: -2, 1: 1})) == 0
    assert winding_number(g({0: -0.5, 1: 1})) == 1


def test_winding_singular():
    with pytest.raises(SingularLoop):
        winding_number(g({0: -1, 1: 1}))  # vanishes at z = 1


def test_reciprocal():
    inv = reciprocal_coeffs(g({-1: 0.5, 0: 1}), window(-6, 0))
    # geometric series in z^{-1}
    for k in range(5):
        assert abs(inv.coeff_at(-k) - (-0.5) ** k) < 1e-12


def test_log_exp_roundtrip():
    u = g({1: 0.3, 2: -0.1j})
    f = germ_exp(u, W)
    assert log_coeffs(f, W).allclose(u, 1e-12)


def test_scalar_factorization_basic():
    f = g({-1: 0.2, 0: 1.5, 1: 0.3, 3: 0.05})
    f_plus, n, f_minus = birkhoff_scalar(f, W)
    assert n == winding_number(f)
    assert abs(f_minus.coeff_at(0) - 1) < 1e-12  # normalized at infinity
    assert f_plus.n_min >= 0 and f_minus.n_max <= 0
    recon = f_plus.mul(LaurentGerm.monomial(n), W).mul(f_minus, W)
    assert recon.allclose(f, 1e-10)


def test_scalar_factorization_with_winding():
    f = g({1: 2.0, 2: 0.4, 3: -0.1})  # = z * (2 + ...)
    _, n, _ = birkhoff_scalar(f, W)
    assert n == 1


def test_matrix_identity_and_det():
    eye = LoopMatrix.identity()
    assert in_identity_component(eye)
    assert eye.det().allclose(LaurentGerm.one(), 1e-14)
    T = LoopMatrix([[LaurentGerm.monomial(1), LaurentGerm.zero()],
                    [LaurentGerm.zero(), LaurentGerm.monomial(-1)]])
    assert winding_number(T.det()) == 0
    assert not in_identity_component(
        LoopMatrix([[LaurentGerm.monomial(1), LaurentGerm.zero()],
                    [LaurentGerm.zero(), LaurentGerm.one()]]))


def test_matrix_diagonal_twist():
    F = LoopMatrix([[LaurentGerm.monomial(2), LaurentGerm.zero()],
                    [LaurentGerm.zero(), LaurentGerm.monomial(-1)]])
    fact = birkhoff_matrix2(F, W)
    assert fact.indices == (2, -1)
    assert sum(fact.indices) == winding_number(F.det())


def _random_matrix(rng):
    entries = []
    for i in range(2):
        row = []
        for j in range(2):
            d = {n: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                 / (1 + abs(n)) * 0.4 for n in range(-3, 4)}
            if i == j:
                d[0] = d.get(0, 0) + 3.0
            row.append(g(d))
        entries.append(row)
    return LoopMatrix(entries)


def test_matrix_factorization_roundtrip():
    rng = random.Random(99)
    for _ in range(3):
        F = _random_matrix(rng)
        fact = birkhoff_matrix2(F, window(-10, 10))
        n1, n2 = fact.indices
        assert n1 >= n2
        assert n1 + n2 == winding_number(F.det())
        recon = fact.reconstruct(window(-10, 10))
        err = max(abs(recon.entries[i][j].coeff_at(n)
                      - F.entries[i][j].coeff_at(n))
                  for i in range(2) for j in range(2)
                  for n in range(-10, 11))
        assert err <= 1e-9
