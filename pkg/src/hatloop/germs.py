"""Truncated two-sided Laurent series ("germs") and their arithmetic.

A germ is a finite coefficient slice ``sum_{n} c_n z^n`` held in canonical
trimmed form, tagged with a scalar domain (``"complex"`` or ``"exact"``)
and an informational radius.  All window-sensitive operations take an
explicit :class:`TruncationWindow`.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainMismatch, OneSidedError, ParseError
from .scalars import COMPLEX, EXACT, QGamma, coerce, scalar_is_zero


class TruncationWindow(NamedTuple):
    """Inclusive exponent window ``lo <= n <= hi`` with ``lo <= 0 <= hi``."""

    lo: int
    hi: int

    def validate(self):
        if not (self.lo <= 0 <= self.hi):
            raise ValueError(f"window must straddle 0, got {self!r}")
        return self

    def contains(self, n):
        return self.lo <= n <= self.hi


def window(lo, hi):
    return TruncationWindow(int(lo), int(hi)).validate()


class LaurentGerm:
    """Canonical truncated Laurent series.

    ``coeffs[k]`` is the coefficient of ``z**(n_min + k)``; leading and
    trailing exact zeros are trimmed, and the zero germ has empty coeffs.
    """

    __slots__ = ("n_min", "coeffs", "radius", "domain")

    def __init__(self, n_min, coeffs, domain=COMPLEX, radius=1.0):
        coeffs = [coerce(c, domain) for c in coeffs]
        lo = 0
        while lo < len(coeffs) and scalar_is_zero(coeffs[lo]):
            lo += 1
        hi = len(coeffs)
        while hi > lo and scalar_is_zero(coeffs[hi - 1]):
            hi -= 1
        object.__setattr__(self, "n_min", int(n_min) + lo if hi > lo else 0)
        object.__setattr__(self, "coeffs", tuple(coeffs[lo:hi]))
        object.__setattr__(self, "radius", float(radius))
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, domain=COMPLEX, radius=1.0):
        return cls(0, (), domain, radius)

    @classmethod
    def one(cls, domain=COMPLEX, radius=1.0):
        return cls.monomial(0, 1, domain, radius)

    @classmethod
    def monomial(cls, n, c=1, domain=COMPLEX, radius=1.0):
        return cls(n, (c,), domain, radius)

    @classmethod
    def from_dict(cls, d, domain=COMPLEX, radius=1.0):
        if not d:
            return cls.zero(domain, radius)
        lo = min(d)
        hi = max(d)
        row = [d.get(n, 0) for n in range(lo, hi + 1)]
        return cls(lo, row, domain, radius)

    # -- queries ----------------------------------------------------------
    @property
    def n_max(self):
        return self.n_min + len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def coeff_at(self, n):
        k = n - self.n_min
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self._zero_scalar()

    def _zero_scalar(self):
        return 0j if self.domain == COMPLEX else QGamma.zero()

    def items(self):
        for k, c in enumerate(self.coeffs):
            if not scalar_is_zero(c):
                yield self.n_min + k, c

    def support(self):
        return [n for n, _ in self.items()]

    def __eq__(self, other):
        if not isinstance(other, LaurentGerm):
            return NotImplemented
        return (self.domain == other.domain and self.n_min == other.n_min
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.domain, self.n_min, self.coeffs))

    def __repr__(self):
        body = ", ".join(f"{n}: {c!r}" for n, c in self.items())
        return f"LaurentGerm({{{body}}}, domain={self.domain!r})"

    def allclose(self, other, tol=1e-9):
        """Coefficientwise comparison for complex-domain germs."""
        lo = min(self.n_min, other.n_min) if (self.coeffs or other.coeffs) \
            else 0
        hi = max(self.n_max, other.n_max) if (self.coeffs or other.coeffs) \
            else 0
        return all(abs(self.coeff_at(n) - other.coeff_at(n)) <= tol
                   for n in range(lo, hi + 1))

    def _check_domain(self, other):
        if self.domain != other.domain:
            raise DomainMismatch(
                f"mixed scalar domains {self.domain!r} / {other.domain!r}")

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        self._check_domain(other)
        out = dict(self.items())
        for n, c in other.items():
            out[n] = out.get(n, 0) + c
        return LaurentGerm.from_dict(out, self.domain,
                                     min(self.radius, other.radius))

    def __neg__(self):
        return LaurentGerm(self.n_min, [-c for c in self.coeffs],
                           self.domain, self.radius)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = coerce(scalar, self.domain)
        return LaurentGerm(self.n_min, [scalar * c for c in self.coeffs],
                           self.domain, self.radius)

    def mul(self, other, w=None):
        """Cauchy product, clipped to window ``w`` when given."""
        self._check_domain(other)
        out = {}
        for n, c in self.items():
            for m, d in other.items():
                k = n + m
                if w is not None and not w.contains(k):
                    continue
                out[k] = out.get(k, 0) + c * d
        return LaurentGerm.from_dict(out, self.domain,
                                     min(self.radius, other.radius))

    def evaluate(self, z):
        if self.domain != COMPLEX:
            raise DomainMismatch("evaluate needs the complex domain")
        return sum((c * z ** n for n, c in self.items()), 0j)

    # -- serialization ------------------------------------------------------
    def to_json(self):
        if self.domain == COMPLEX:
            return {"n_min": self.n_min,
                    "coeffs": [[c.real, c.imag] for c in self.coeffs],
                    "radius": self.radius}
        return {"n_min": self.n_min,
                "coeffs": [c.format() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        try:
            coeffs = obj["coeffs"]
            n_min = int(obj.get("n_min", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad germ object: {exc}") from None
        radius = float(obj.get("radius", 1.0))
        if all(isinstance(c, str) for c in coeffs) and coeffs:
            vals = [QGamma.parse(c) for c in coeffs]
            return cls(n_min, vals, EXACT, radius)
        vals = []
        for c in coeffs:
            if isinstance(c, (list, tuple)) and len(c) == 2:
                vals.append(complex(c[0], c[1]))
            elif isinstance(c, (int, float)):
                vals.append(complex(c))
            else:
                raise ParseError(f"bad coefficient {c!r}")
        return cls(n_min, vals, COMPLEX, radius)


# ---------------------------------------------------------------------------
# module-level operations


def germ_add(f, g):
    return f + g


def germ_mul(f, g, w):
    return f.mul(g, w)


def split_pm(f):
    """Split into (plus part: exponents >= 0, minus part: exponents < 0)."""
    plus = {n: c for n, c in f.items() if n >= 0}
    minus = {n: c for n, c in f.items() if n < 0}
    return (LaurentGerm.from_dict(plus, f.domain, f.radius),
            LaurentGerm.from_dict(minus, f.domain, f.radius))


def rescale(f, gamma):
    """z -> gamma * z on the argument: coefficient n picks up gamma**n."""
    gamma = _rescale_factor(gamma, f.domain)
    out = {n: (gamma ** n) * c for n, c in f.items()}
    radius = f.radius
    if f.domain == COMPLEX and gamma != 0:
        radius = f.radius / abs(gamma)
    return LaurentGerm.from_dict(out, f.domain, radius)


def _rescale_factor(gamma, domain):
    if domain == COMPLEX:
        g = complex(gamma)
        if g == 0:
            raise DomainMismatch("rescale factor must be nonzero")
        return g
    g = coerce(gamma, EXACT)
    if g.is_zero() or not g.is_monomial():
        raise DomainMismatch(
            "exact rescale factor must be an invertible monomial")
    return g


def derivative(f):
    out = {n - 1: n * c for n, c in f.items() if n != 0}
    return LaurentGerm.from_dict(out, f.domain, f.radius)


def residue(f):
    """Coefficient at z**-1."""
    return f.coeff_at(-1)


def coeff_at(f, n):
    return f.coeff_at(n)


def product_coeff(f, g, n):
    """Coefficient of z**n in f*g, computed without window truncation."""
    f._check_domain(g)
    total = f._zero_scalar()
    for k, c in f.items():
        d = g.coeff_at(n - k)
        total = total + c * d
    return total


def truncate_ge(f, n):
    return LaurentGerm.from_dict({m: c for m, c in f.items() if m >= n},
                                 f.domain, f.radius)


def truncate_le(f, n):
    return LaurentGerm.from_dict({m: c for m, c in f.items() if m <= n},
                                 f.domain, f.radius)


def truncate_gt(f, n):
    return truncate_ge(f, n + 1)


def truncate_lt(f, n):
    return truncate_le(f, n - 1)


def _one_sided_direction(f):
    """+1 for exponents >= 0, -1 for <= 0 (0 germ counts as +1)."""
    if f.is_zero():
        return 1
    if f.n_min >= 0:
        return 1
    if f.n_max <= 0:
        return -1
    raise OneSidedError(
        "operation needs a one-sided germ, got exponents "
        f"[{f.n_min}, {f.n_max}]")


def germ_exp(f, w):
    """exp of a one-sided germ, truncated to ``w``.

    Over the exact domain the constant term must vanish (its exponential
    would leave the ring); over complex it is folded in numerically.
    """
    direction = _one_sided_direction(f)
    c0 = f.coeff_at(0)
    if not scalar_is_zero(c0):
        if f.domain == EXACT:
            raise DomainMismatch(
                "exact exp needs a vanishing constant term")
        base = cmath.exp(c0)
    else:
        base = None
    u = truncate_gt(f, 0) if direction > 0 else truncate_lt(f, 0)
    order = w.hi if direction > 0 else -w.lo
    out = LaurentGerm.one(f.domain, f.radius)
    term = LaurentGerm.one(f.domain, f.radius)
    for k in range(1, order + 1):
        term = term.mul(u, w)
        if term.is_zero():
            break
        if f.domain == EXACT:
            term = term.scale(Fraction(1, k))
        else:
            term = term.scale(1.0 / k)
        out = out + term
    if base is not None:
        out = out.scale(base)
    return out


def germ_log(f, w):
    """log of a one-sided germ with invertible constant term.

    Over the exact domain the constant term must be exactly 1.
    """
    direction = _one_sided_direction(f)
    c0 = f.coeff_at(0)
    if scalar_is_zero(c0):
        raise DomainMismatch("log needs a nonzero constant term")
    if f.domain == EXACT:
        if not (isinstance(c0, QGamma) and c0.is_one()):
            raise DomainMismatch("exact log needs constant term 1")
        base = None
        u = f - LaurentGerm.one(EXACT, f.radius)
    else:
        base = cmath.log(c0)
        u = f.scale(1.0 / c0) - LaurentGerm.one(COMPLEX, f.radius)
    order = w.hi if direction > 0 else -w.lo
    out = LaurentGerm.zero(f.domain, f.radius)
    term = LaurentGerm.one(f.domain, f.radius)
    for k in range(1, order + 1):
        term = term.mul(u, w)
        if term.is_zero():
            break
        sign = 1 if k % 2 == 1 else -1
        if f.domain == EXACT:
            out = out + term.scale(Fraction(sign, k))
        else:
            out = out + term.scale(sign / k)
    if base is not None and base != 0:
        out = out + LaurentGerm.monomial(0, base, COMPLEX, f.radius)
    return out


def truncate_window(f, w):
    return LaurentGerm.from_dict(
        {n: c for n, c in f.items() if w.contains(n)}, f.domain, f.radius)


def bell_coeffs(h, sign, order):
    """Coefficients ``e_0..e_order`` of ``exp(sign * sum_r h[r-1] z^r)``.

    Generic over any commutative coefficient ring that supports ``+``,
    ``*`` and multiplication by ``Fraction`` (complex numbers, rationals,
    polynomial rings, ...).  Uses the Newton-type recurrence
    ``n e_n = sign * sum_{r<=n} r h_r e_{n-r}``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if order < 0:
        raise ValueError("order must be >= 0")
    e = [1]
    for n in range(1, order + 1):
        acc = None
        for r in range(1, n + 1):
            if r > len(h):
                break
            prod = h[r - 1] * e[n - r]
            try:
                piece = prod * Fraction(sign * r, n)
            except TypeError:
                piece = prod * (sign * r / n)
            acc = piece if acc is None else acc + piece
        if acc is None:
            acc = 0 * e[0]
        e.append(acc)
    return e
