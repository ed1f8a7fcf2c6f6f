"""Twisted conjugation, normal forms and symplectic-leaf data.

Everything here lives over the complex domain with |Gamma| != 1: the
elliptic quotient E = C^*/(z ~ Theta z) with Theta = Gamma^4 only makes
sense away from the unit modulus case, and all the divisors
(Gamma^n - Gamma^-n) appearing in the normal-form constructions are
guarded by a small-divisor tolerance rather than regularized.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .birkhoff import LoopMatrix, log_coeffs, reciprocal_coeffs, \
    winding_number
from .errors import (ConvergenceError, DomainMismatch, NonGeneric,
                     SmallDivisor)
from .extgroup import ExtendedElement, h_pair_is_member, hat_inv, hat_mul
from .germs import (COMPLEX, LaurentGerm, germ_exp, rescale, split_pm,
                    truncate_window, window)

EPS_DIVISOR = 1e-10


def _exp_scalar(f, w):
    """exp of a (possibly two-sided) scalar germ, windowed.

    Scalar germs commute, so exp(f) = exp(f_+) exp(f_-) with the
    one-sided pieces handled by germ_exp.
    """
    plus, minus = split_pm(f)
    out = germ_exp(plus, w)
    if not minus.is_zero():
        out = out.mul(germ_exp(minus, w), w)
    return out


def _check_theta(theta):
    theta = complex(theta)
    if abs(abs(theta) - 1) < 1e-12 or theta == 0:
        raise DomainMismatch("|Theta| must differ from 1")
    return theta


class EllipticPoint:
    """Point of E = C^*/(z ~ Theta z), stored by its canonical
    representative in the fundamental annulus 1 <= |rep| < |Theta|."""

    __slots__ = ("rep", "theta")

    def __init__(self, rep, theta):
        theta = _check_theta(theta)
        rep = complex(rep)
        if rep == 0:
            raise DomainMismatch("elliptic point must be nonzero")
        t = theta if abs(theta) > 1 else 1.0 / theta
        k = -math.floor(math.log(abs(rep)) / math.log(abs(t)) + 1e-13)
        rep = rep * t ** k
        # float drift can leave rep marginally outside the annulus
        while abs(rep) >= abs(t) * (1 - 1e-13):
            rep /= t
        while abs(rep) < 1 - 1e-13:
            rep *= t
        self.rep = rep
        self.theta = theta

    def inverse(self):
        return EllipticPoint(1.0 / self.rep, self.theta)

    def __repr__(self):
        return f"EllipticPoint({self.rep!r}, theta={self.theta!r})"

    def to_json(self):
        return {"alpha_rep": [self.rep.real, self.rep.imag],
                "theta": [self.theta.real, self.theta.imag]}


def elliptic_class(alpha, theta):
    return EllipticPoint(alpha, theta)


def elliptic_equal(p, q, tol=1e-8):
    if abs(p.theta - q.theta) > tol * max(1.0, abs(p.theta)):
        return False
    t = p.theta if abs(p.theta) > 1 else 1.0 / p.theta
    # canonical reps sitting on opposite edges of the annulus both count
    return any(abs(p.rep * t ** k - q.rep) <= tol * max(1.0, abs(q.rep))
               for k in (-1, 0, 1))


def eprime_equal(p, q, tol=1e-8):
    """Equality in E' = E/(z ~ z^{-1})."""
    return elliptic_equal(p, q, tol) or elliptic_equal(p.inverse(), q, tol)


class TwistedOrbitInvariantGL1:
    """Complete invariant (E-class of alpha, lambda', Gamma) of a
    twisted GL1 orbit."""

    __slots__ = ("alpha_class", "lam", "gamma")

    def __init__(self, alpha_class, lam, gamma):
        lam = complex(lam)
        if lam == 0:
            raise DomainMismatch("lambda must be nonzero")
        self.alpha_class = alpha_class
        self.lam = lam
        self.gamma = complex(gamma)

    def close_to(self, other, tol=1e-8):
        return (elliptic_equal(self.alpha_class, other.alpha_class, tol)
                and abs(self.lam - other.lam) <= tol * max(1, abs(self.lam))
                and abs(self.gamma - other.gamma) <= tol)

    def to_json(self):
        out = self.alpha_class.to_json()
        out["lambda"] = [self.lam.real, self.lam.imag]
        out["gamma"] = [self.gamma.real, self.gamma.imag]
        return out

    def __repr__(self):
        return (f"TwistedOrbitInvariantGL1({self.alpha_class!r}, "
                f"lam={self.lam!r}, gamma={self.gamma!r})")


def gl1_diagonalize(a, rho=None, eps=EPS_DIVISOR, tol=1e-8):
    """Conjugate ``a = (e^f, lambda, Gamma)`` to ``(alpha, lambda', Gamma)``.

    The conjugator ``(e^g, 1, rho)`` has ``g_n = a_n rho^n /
    (Gamma^n - Gamma^-n)``; the constant mode survives as the invariant
    ``alpha = e^{f_0}`` up to the lattice Theta = Gamma^4 (absorbed by
    the elliptic class), and ``lambda'`` is read off the conjugation.
    """
    if a.domain != COMPLEX:
        raise DomainMismatch("gl1_diagonalize is numeric")
    if a.n != 0:
        raise DomainMismatch("loop must have winding 0")
    a = a.fold_const()
    gamma = a.gamma
    if abs(abs(gamma) - 1) < 1e-12:
        raise DomainMismatch("|Gamma| = 1 is not supported")
    if rho is None:
        rho = gamma
    rho = complex(rho)
    g = {}
    for n, c in a.f.items():
        if n == 0:
            continue
        den = gamma ** n - gamma ** (-n)
        if abs(den) <= eps:
            raise SmallDivisor(f"Gamma^{n} - Gamma^{-n} below tolerance")
        g[n] = c * rho ** n / den
    u = ExtendedElement(0, LaurentGerm.from_dict(g, COMPLEX, a.f.radius),
                        1.0, rho)
    res = hat_mul(hat_mul(u, a), hat_inv(u)).fold_const()
    residue = max((abs(c) for n, c in res.f.items() if n != 0),
                  default=0.0)
    if residue > tol:
        raise NonGeneric(f"conjugation left modes of size {residue}")
    alpha = cmath.exp(res.f.coeff_at(0))
    inv = TwistedOrbitInvariantGL1(
        elliptic_class(alpha, gamma ** 4), res.lam, gamma)
    return inv, u.f


def gl1_leaf_point(f, alpha, lam, gamma, check=True):
    """Point of the symplectic leaf through ``(alpha, lam)`` at fixed
    Gamma, parameterized by a germ ``f = f_minus - f_plus`` with zero
    constant term.

    The two components are ``(alpha^-1 e^{f_plus}, lam^-1 e^{-S},
    Gamma^-1)`` and ``(alpha e^{f_minus}, lam e^{S}, Gamma)`` with
    ``S = sum_{n != 0} n f_n f_{-n} / (2 (1 - Gamma^{-4n})^2)``.  The
    base point keeps the leaf's Gamma: its stated third coordinate is
    read as not acting on the loop variable.
    """
    if f.domain != COMPLEX:
        raise DomainMismatch("gl1_leaf_point is numeric")
    gamma = complex(gamma)
    if abs(abs(gamma) - 1) < 1e-12:
        raise DomainMismatch("|Gamma| = 1 is not supported")
    if abs(f.coeff_at(0)) > 1e-13:
        raise DomainMismatch("f must have zero constant term")
    f_minus = LaurentGerm.from_dict(
        {n: c for n, c in f.items() if n < 0}, COMPLEX, f.radius)
    f_plus = LaurentGerm.from_dict(
        {n: -c for n, c in f.items() if n > 0}, COMPLEX, f.radius)
    s = 0j
    for n, c in f.items():
        s += n * c * f.coeff_at(-n) / (2 * (1 - gamma ** (-4 * n)) ** 2)
    alpha = complex(alpha)
    lam = complex(lam)
    left = ExtendedElement(0, f_plus, cmath.exp(-s) / lam, 1.0 / gamma,
                           const=1.0 / alpha)
    right = ExtendedElement(0, f_minus, cmath.exp(s) * lam, gamma,
                            const=alpha)
    if check and not h_pair_is_member(left, right, tol=1e-8):
        raise DomainMismatch("constructed point fails H membership")
    return left, right


def sl2_diag_equivalent(alpha, lam, alpha_p, lam_p, theta, tol=1e-8):
    """Diagonal classes (alpha, lam) and (alpha', lam') coincide iff the
    lambdas agree and alpha lies in alpha' Theta^Z or its inverse."""
    if abs(complex(lam) - complex(lam_p)) > tol * max(1, abs(complex(lam))):
        return False
    return eprime_equal(elliptic_class(alpha, theta),
                        elliptic_class(alpha_p, theta), tol)


# ---------------------------------------------------------------------------
# Twisted conjugation


def _auto_window(*germs):
    lo, hi = -4, 4
    for g in germs:
        if not g.is_zero():
            lo = min(lo, 2 * g.n_min - 4)
            hi = max(hi, 2 * g.n_max + 4)
    return window(lo, hi)


def twisted_conjugate(g, a, theta, w=None):
    """The action ``g . a = g(Theta z) a(z) g(z)^{-1}``.

    ``g`` and ``a`` are either both scalar loops (LaurentGerm) or both
    LoopMatrix; the result is truncated to ``w`` (an automatic window
    wide enough for the inputs when omitted).
    """
    theta = complex(theta)
    if isinstance(g, LaurentGerm):
        if w is None:
            w = _auto_window(g, a)
        num = rescale(g, theta).mul(a, None)
        return num.mul(reciprocal_coeffs(g, w), w)
    if w is None:
        w = _auto_window(*(g[i, j] for i in range(2) for j in range(2)),
                         *(a[i, j] for i in range(2) for j in range(2)))
    g_shift = LoopMatrix([[rescale(g[i, j], theta) for j in range(2)]
                          for i in range(2)])
    det = g.det(None)
    det_inv = reciprocal_coeffs(det, w)
    adj = LoopMatrix([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])
    g_inv = LoopMatrix([[adj[i, j].mul(det_inv, w) for j in range(2)]
                        for i in range(2)])
    return g_shift.mul(a, None).mul(g_inv, w)


# ---------------------------------------------------------------------------
# SL2 triangular reduction


class Sl2Reduction:
    """Diagonal normal form of a lower-triangular loop together with
    the conjugator chain, so the input can be reconstructed."""

    __slots__ = ("alpha", "lam", "diag_exponent", "lower", "theta")

    def __init__(self, alpha, lam, diag_exponent, lower, theta):
        self.alpha = complex(alpha)
        self.lam = complex(lam)
        self.diag_exponent = diag_exponent
        self.lower = lower
        self.theta = complex(theta)

    def invariant(self):
        return elliptic_class(self.alpha, self.theta), self.lam

    def equivalent_to(self, other, tol=1e-8):
        return sl2_diag_equivalent(self.alpha, self.lam, other.alpha,
                                   other.lam, self.theta, tol)

    def diagonal(self):
        return LoopMatrix(
            [[LaurentGerm.monomial(0, self.alpha), LaurentGerm.zero()],
             [LaurentGerm.zero(),
              LaurentGerm.monomial(0, 1.0 / self.alpha)]])

    def replay(self, w=None):
        """Undo the conjugator chain on the diagonal normal form,
        reconstructing the reduced input."""
        if w is None:
            w = _auto_window(self.diag_exponent, self.lower)
        zero = LaurentGerm.zero()
        one = LaurentGerm.one()
        d_inv = LoopMatrix([[_exp_scalar(-self.diag_exponent, w), zero],
                            [zero, _exp_scalar(self.diag_exponent, w)]])
        low_inv = LoopMatrix([[one, zero], [-self.lower, one]])
        step = twisted_conjugate(low_inv, self.diagonal(), self.theta, w)
        return twisted_conjugate(d_inv, step, self.theta, w)


def sl2_triangular_reduce(A, lam, gamma, w=None, eps=EPS_DIVISOR,
                          tol=1e-8):
    """Reduce a lower-triangular unit-determinant loop to diag(a, 1/a)
    under Theta-twisted conjugation, Theta = Gamma^4.

    A diagonal conjugation diag(e^g, e^{-g}) with
    ``g_n = u_n / (1 - Theta^n)`` (u the log of A11) flattens A11 to
    its constant invariant alpha, then a unipotent lower conjugation
    with ``c_n = -B_n / (alpha Theta^n - alpha^{-1})`` removes the
    corner entry.  alpha in +-Gamma^{2Z} makes those divisors vanish
    and is rejected as non-generic.
    """
    gamma = complex(gamma)
    if abs(abs(gamma) - 1) < 1e-12:
        raise DomainMismatch("|Gamma| = 1 is not supported")
    theta = gamma ** 4
    if not A[0, 1].is_zero():
        raise DomainMismatch("matrix must be lower triangular")
    a11 = A[0, 0]
    if w is None:
        w = _auto_window(a11, A[1, 0], A[1, 1])
    if winding_number(a11) != 0:
        raise NonGeneric("A11 must have winding number zero")
    det_diff = A.det(w) - LaurentGerm.one()
    if max((abs(c) for _, c in det_diff.items()), default=0.0) > 1e-8:
        raise DomainMismatch("determinant must be 1")
    u = log_coeffs(a11, w)
    alpha = cmath.exp(u.coeff_at(0))
    g = {}
    for n, c in u.items():
        if n == 0:
            continue
        den = 1.0 - theta ** n
        if abs(den) <= eps:
            raise SmallDivisor(f"1 - Theta^{n} below tolerance")
        g[n] = c / den
    g = LaurentGerm.from_dict(g, COMPLEX, a11.radius)
    zero = LaurentGerm.zero()
    d = LoopMatrix([[_exp_scalar(g, w), zero], [zero, _exp_scalar(-g, w)]])
    b = twisted_conjugate(d, A, theta, w)
    c = {}
    for n, coeff in b[1, 0].items():
        den = alpha * theta ** n - 1.0 / alpha
        if abs(den) <= eps:
            raise NonGeneric(
                "alpha is a power of Gamma^2 within tolerance")
        c[n] = -coeff / den
    c = LaurentGerm.from_dict(c, COMPLEX, a11.radius)
    red = Sl2Reduction(alpha, lam, g, c, theta)
    low = LoopMatrix([[LaurentGerm.one(), zero],
                      [c, LaurentGerm.one()]])
    final = twisted_conjugate(low, b, theta, w)
    resid = max(max((abs(v) for _, v in (final[i, j] - red.diagonal()[
        i, j]).items()), default=0.0) for i in range(2) for j in range(2))
    if resid > tol * max(1.0, A.max_abs()):
        raise NonGeneric(f"reduction residual {resid} above tolerance")
    return red


# ---------------------------------------------------------------------------
# q-difference solver


def qdiff_solve(A, theta, max_iter=50, tol=1e-8, w=None, gamma2=None,
                eps=EPS_DIVISOR):
    """Solve -A21 g(Theta z) g(z) - A11 g(Gamma^2 z) + A22 g(z) + A12 = 0.

    ``gamma2`` is Gamma^2 (the principal square root of Theta when
    omitted).  Fixed-point iteration: the linear part
    ``-A11 g(Gamma^2 z) + A22 g(z)`` is solved for the windowed
    coefficients of ``g``, the quadratic term is fed back from the
    previous iterate, repeating until the full residual drops below
    ``tol``.
    """
    theta = _check_theta(theta)
    if gamma2 is None:
        gamma2 = cmath.sqrt(theta)
    gamma2 = complex(gamma2)
    a11, a12 = A[0, 0], A[0, 1]
    a21, a22 = A[1, 0], A[1, 1]
    if w is None:
        w = _auto_window(a11, a12, a21, a22)
    modes = list(range(w.lo, w.hi + 1))
    index = {n: i for i, n in enumerate(modes)}
    dim = len(modes)
    def to_vec(f):
        v = np.zeros(dim, dtype=complex)
        for n, c in f.items():
            if n in index:
                v[index[n]] = c
        return v

    def to_germ(v):
        return LaurentGerm.from_dict(
            {n: complex(v[i]) for i, n in enumerate(modes)}, COMPLEX,
            a11.radius)

    def defect(g):
        return truncate_window(
            -a21.mul(rescale(g, theta), None).mul(g, w)
            - a11.mul(rescale(g, gamma2), w) + a22.mul(g, w) + a12, w)

    def rmax(r):
        return max((abs(c) for _, c in r.items()), default=0.0)

    def jacobian(g):
        gt = rescale(g, theta)
        mat = np.zeros((dim, dim), dtype=complex)
        for j, n in enumerate(modes):
            e = LaurentGerm.monomial(n, 1.0)
            col = (-a21.mul(rescale(e, theta).mul(g, w) + gt.mul(e, w), w)
                   - a11.mul(rescale(e, gamma2), w) + a22.mul(e, w))
            for i_mode, c in truncate_window(col, w).items():
                mat[index[i_mode], j] += c
        return mat

    base = jacobian(LaurentGerm.zero())
    if np.linalg.cond(base) > 1.0 / max(eps, 1e-14):
        raise SmallDivisor("linear part of the q-difference "
                           "equation is near-singular")

    # Newton with backtracking: a plain fixed-point sweep amplifies
    # window-edge noise by Theta^n and diverges for generic data.
    g = LaurentGerm.zero()
    r = defect(g)
    res = rmax(r)
    for _ in range(max_iter):
        if res <= tol:
            return g
        mat = base if g.is_zero() else jacobian(g)
        try:
            delta = np.linalg.solve(mat, -to_vec(r))
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        dg = to_germ(delta)
        step = 1.0
        for _ in range(24):
            g_try = g + dg.scale(step)
            r_try = defect(g_try)
            res_try = rmax(r_try)
            if res_try < res or res_try <= tol:
                g, r, res = g_try, r_try, res_try
                break
            step *= 0.5
        else:
            break
    if res <= tol:
        return g
    raise ConvergenceError(
        f"no solution with residual <= {tol} in {max_iter} iterations "
        f"(last residual {res:.3e})")
