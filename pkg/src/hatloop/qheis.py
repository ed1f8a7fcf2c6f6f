"""q-deformed Heisenberg algebra and its semiclassical limit.

The algebra is generated by h_m (m != 0), an invertible Lambda and a
central invertible Gamma over exact rational functions of q, subject to

    [h_m, h_{-m}] = (1/m) [m]_q (Gamma^{2m} - Gamma^{-2m}) / (q - q^{-1}),
    h_m Lambda = q^{2m} Lambda h_m,

all other generator pairs commuting.  Elements are kept in PBW normal
order (h's sorted by index, so negative indices stand left of positive
ones, Lambda and Gamma powers rightmost).

``semiclassical_limit`` divides a commutator of Frobenius images by the
level-``ell`` deformation parameter ``ell (q^ell - q^-ell)``, absorbs one
``(q - q^{-1})`` into each surviving h coordinate (matching the
classical normalization of the Poisson module), reduces exactly modulo
the ell-th cyclotomic polynomial, and returns a PoissonPoly.  All
arithmetic is exact; sympy supplies the rational-function and
cyclotomic machinery.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

import sympy
from sympy import Poly, Rational, cancel, fraction, symbols, together

from .errors import NotInCenter
from .poisson import PoissonPoly

q = symbols("q")


def _check_ell(ell):
    ell = int(ell)
    if ell < 3 or ell % 2 == 0:
        raise ValueError("ell must be an odd integer >= 3")
    return ell


def _h_weight(hpart):
    return sum(idx * p for idx, p in hpart)


def _h_degree(hpart):
    return sum(p for _, p in hpart)


class QHeisenbergElement:
    """Normal-ordered sum of PBW monomials with sympy coefficients.

    A monomial key is ``(hpart, lam, gamma)`` where ``hpart`` is a
    sorted tuple of (index, power) pairs.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for key, coeff in terms.items():
                coeff = sympy.sympify(coeff)
                if coeff != 0:
                    key = (tuple(sorted((i, p) for i, p in key[0] if p)),
                           int(key[1]), int(key[2]))
                    data[key] = data.get(key, 0) + coeff
        self.terms = {k: sympy.cancel(c) for k, c in data.items()}
        self.terms = {k: c for k, c in self.terms.items() if c != 0}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({((), 0, 0): 1})

    @classmethod
    def h(cls, m, coeff=1):
        if m == 0:
            raise ValueError("h index must be nonzero")
        return cls({(((m, 1),), 0, 0): coeff})

    @classmethod
    def lam(cls, power=1):
        return cls({((), power, 0): 1})

    @classmethod
    def gamma(cls, power=1):
        return cls({((), 0, power): 1})

    def __add__(self, other):
        data = dict(self.terms)
        for k, c in other.terms.items():
            data[k] = data.get(k, 0) + c
        return QHeisenbergElement(data)

    def __neg__(self):
        return QHeisenbergElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = sympy.sympify(s)
        return QHeisenbergElement(
            {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for key, coeff in _mul_monomials(k1, k2):
                    out[key] = out.get(key, 0) + c1 * c2 * coeff
        return QHeisenbergElement(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, QHeisenbergElement):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        bits = []
        for (hp, lam, gam), c in sorted(self.terms.items(),
                                        key=lambda kv: repr(kv[0])):
            sym = "".join(f"h[{i}]^{p}" if p > 1 else f"h[{i}]"
                          for i, p in hp)
            if lam:
                sym += f"L^{lam}"
            if gam:
                sym += f"G^{gam}"
            bits.append(f"({c})*{sym or '1'}")
        return " + ".join(bits) or "0"


def _central_pair_coeff(a):
    """[h_a, h_{-a}] = coeff * (Gamma^{2a} - Gamma^{-2a}), a > 0."""
    return (q ** a - q ** (-a)) / (a * (q - 1 / q) ** 2)


def _central_power(a, j):
    """C_a^j expanded into (coefficient, Gamma exponent) pairs."""
    c = _central_pair_coeff(a) ** j
    out = []
    for i in range(j + 1):
        out.append((c * comb(j, i) * (-1) ** (j - i), 2 * a * (2 * i - j)))
    return out


def _mul_monomials(k1, k2):
    """Product of two PBW monomials as a list of (key, coeff) pairs."""
    h1, l1, g1 = k1
    h2, l2, g2 = k2
    # Lambda^{l1} crossing the h's of the right factor.
    base = q ** (-2 * l1 * _h_weight(h2))
    d1 = dict(h1)
    d2 = dict(h2)
    # Only (h_a, h_{-a}) with a > 0 on the left and -a on the right
    # fail to commute; expand each such pair by the Weyl-pair identity
    # h_a^p h_{-a}^r = sum_j j! C(p,j) C(r,j) C_a^j h_{-a}^{r-j} h_a^{p-j}.
    clash = sorted(a for a in d1 if a > 0 and -a in d2)
    expansions = []
    for a in clash:
        p, r = d1[a], d2[-a]
        options = []
        for j in range(min(p, r) + 1):
            w = factorial(j) * comb(p, j) * comb(r, j)
            for cc, gexp in _central_power(a, j):
                options.append((a, j, w * cc, gexp))
        expansions.append(options)
    out = []
    for combo in itertools.product(*expansions):
        coeff = base
        gshift = 0
        hout = {}
        for idx in set(d1) | set(d2):
            hout[idx] = d1.get(idx, 0) + d2.get(idx, 0)
        for a, j, cc, gexp in combo:
            coeff = coeff * cc
            gshift += gexp
            hout[a] -= j
            hout[-a] -= j
        key = (tuple(sorted((i, p) for i, p in hout.items() if p)),
               l1 + l2, g1 + g2 + gshift)
        out.append((key, coeff))
    return out


def commutator(x, y):
    return x * y - y * x


def fr_h(m, ell):
    """Frobenius image of the level-one h_m: ell (q - q^{-1}) h_{m ell}."""
    ell = _check_ell(ell)
    return QHeisenbergElement.h(m * ell, ell * (q - 1 / q))


def fr_lambda(ell):
    return QHeisenbergElement.lam(_check_ell(ell))


def fr_gamma(ell):
    return QHeisenbergElement.gamma(_check_ell(ell))


def q_heisenberg_commutator(m, mp, ell=3):
    """Commutator of the Frobenius images of h_m and h_{m'}."""
    if m == 0 or mp == 0:
        raise ValueError("h index must be nonzero")
    return commutator(fr_h(m, ell), fr_h(mp, ell))


def _reduce_at_root(expr, ell):
    """Exact value of ``expr`` at a primitive ell-th root of unity.

    Reduces numerator and denominator modulo the ell-th cyclotomic
    polynomial, dividing out common cyclotomic factors first; raises
    NotInCenter if a pole survives or the value is not a rational
    constant.
    """
    expr = cancel(together(expr))
    num, den = fraction(expr)
    num = Poly(sympy.expand(num), q, domain="QQ")
    den = Poly(sympy.expand(den), q, domain="QQ")
    phi = Poly(sympy.cyclotomic_poly(ell, q), q, domain="QQ")
    while den.rem(phi).is_zero:
        if not num.rem(phi).is_zero:
            raise NotInCenter("pole at the root of unity")
        num = num.quo(phi)
        den = den.quo(phi)
    num_r = num.rem(phi)
    den_r = den.rem(phi)
    s, _, g = sympy.gcdex(den_r.as_expr(), phi.as_expr(), q)
    # phi is irreducible over Q, so gcd(den_r, phi) is a constant.
    inv = Poly(s / g, q, domain="QQ")
    val = (num_r * inv).rem(phi)
    if val.degree() > 0:
        raise NotInCenter("value is not constant at the root of unity")
    c = val.as_expr()
    if not (c.is_rational or c == 0):
        raise NotInCenter(f"non-rational specialization {c}")
    return Fraction(sympy.Rational(c).p, sympy.Rational(c).q)


def semiclassical_limit(x, ell):
    """Classical limit of a commutator at a primitive ell-th root.

    Divides by ``ell (q^ell - q^{-ell})`` and by one ``(q - q^{-1})``
    per h power (the classical h coordinate is the ``(q - q^{-1}) h``
    normalization), specializes q exactly, and maps h_m, Lambda, Gamma
    to the corresponding PoissonPoly symbols.
    """
    ell = _check_ell(ell)
    scale = ell * (q ** ell - q ** (-ell))
    out = PoissonPoly.zero()
    for (hp, lam, gam), coeff in x.terms.items():
        reduced = coeff / (scale * (q - 1 / q) ** _h_degree(hp))
        value = _reduce_at_root(reduced, ell)
        if value == 0:
            continue
        mono = []
        for idx, p in hp:
            mono.append((("h", idx), p))
        if lam:
            mono.append((("L", 0), lam))
        if gam:
            mono.append((("G", 0), gam))
        out = out + PoissonPoly({tuple(mono): value})
    return out
