"""Winding numbers and Birkhoff factorization of loops.

Scalar loops are factorized through the logarithm: sample the loop on the
unit circle, remove the winding monomial, take a continuous branch of the
log, recover its Laurent coefficients by FFT and split them into the
plus/minus parts.  2x2 matrix loops are factorized by solving the linear
system that characterizes the minus factor for a candidate index pair,
searching index candidates from the balanced pair outwards.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (FactorizationFailed, ParseError, SingularLoop)
from .germs import (COMPLEX, LaurentGerm, TruncationWindow, germ_exp,
                    split_pm, truncate_window, window)

EPS_ZERO = 1e-12
N_SAMPLES = 512


def _circle_samples(f, nsamples):
    z = np.exp(2j * np.pi * np.arange(nsamples) / nsamples)
    vals = np.zeros(nsamples, dtype=complex)
    for n, c in f.items():
        vals += c * z ** n
    return z, vals


def winding_number(f, nsamples=N_SAMPLES, eps_zero=EPS_ZERO):
    """Winding of ``f`` around 0 along the unit circle.

    Uses argument unwrapping over ``nsamples`` equispaced points and
    raises :class:`SingularLoop` when the loop gets within ``eps_zero``
    of the origin.
    """
    if f.is_zero():
        raise SingularLoop("zero loop")
    _, vals = _circle_samples(f, nsamples)
    if np.min(np.abs(vals)) < eps_zero:
        raise SingularLoop("loop vanishes on the sampling circle")
    ang = np.angle(vals)
    steps = np.diff(np.concatenate([ang, ang[:1]]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    return int(round(float(steps.sum()) / (2 * math.pi)))


def log_coeffs(f, w, nsamples=2 * N_SAMPLES, eps_zero=EPS_ZERO):
    """Laurent coefficients (within ``w``) of a continuous log of ``f``.

    Requires winding number zero and a loop bounded away from 0.
    """
    _, vals = _circle_samples(f, nsamples)
    if np.min(np.abs(vals)) < eps_zero:
        raise SingularLoop("loop vanishes on the sampling circle")
    args = np.unwrap(np.angle(vals))
    logs = np.log(np.abs(vals)) + 1j * args
    spectrum = np.fft.fft(logs) / nsamples
    out = {}
    for n in range(w.lo, w.hi + 1):
        out[n] = complex(spectrum[n % nsamples])
    return LaurentGerm.from_dict(out, COMPLEX, f.radius)


def reciprocal_coeffs(f, w, nsamples=2 * N_SAMPLES, eps_zero=EPS_ZERO):
    """Laurent coefficients (within ``w``) of 1/f for a winding-0 loop."""
    _, vals = _circle_samples(f, nsamples)
    if np.min(np.abs(vals)) < eps_zero:
        raise SingularLoop("loop vanishes on the sampling circle")
    spectrum = np.fft.fft(1.0 / vals) / nsamples
    out = {n: complex(spectrum[n % nsamples]) for n in range(w.lo, w.hi + 1)}
    return LaurentGerm.from_dict(out, COMPLEX, f.radius)


def birkhoff_scalar(f, w=None, nsamples=2 * N_SAMPLES):
    """Factor ``f = f_plus * z**n * f_minus``.

    ``n`` is the winding number, ``f_plus`` has exponents >= 0 (constant
    included), ``f_minus`` has the shape ``1 + (strictly negative part)``
    so that ``f_minus(inf) = 1``.
    """
    if w is None:
        band = max(abs(f.n_min), abs(f.n_max), 1)
        w = window(-6 * band - 12, 6 * band + 12)
    n = winding_number(f, max(nsamples, N_SAMPLES))
    g = f.mul(LaurentGerm.monomial(-n, 1.0), None)
    logs = log_coeffs(g, w, nsamples)
    gp, gm = split_pm(logs)
    f_plus = _chop(germ_exp(gp, w))
    f_minus = _chop(germ_exp(gm, w))
    return f_plus, n, f_minus


def _chop(f, rel=1e-13):
    """Drop coefficients below ``rel`` times the largest one (sampling
    noise from the FFT-based steps)."""
    top = max((abs(c) for _, c in f.items()), default=0.0)
    if top == 0.0:
        return f
    return LaurentGerm.from_dict(
        {n: c for n, c in f.items() if abs(c) > rel * top},
        f.domain, f.radius)


class LoopMatrix:
    """2x2 matrix of complex-domain germs."""

    __slots__ = ("entries", "radius")

    def __init__(self, entries, radius=None):
        rows = tuple(tuple(row) for row in entries)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ParseError("LoopMatrix must be 2x2")
        self.entries = rows
        if radius is None:
            radius = min(g.radius for row in rows for g in row)
        self.radius = radius

    @classmethod
    def identity(cls):
        one = LaurentGerm.one()
        zero = LaurentGerm.zero()
        return cls(((one, zero), (zero, one)))

    def __getitem__(self, idx):
        return self.entries[idx[0]][idx[1]]

    def mul(self, other, w=None):
        out = [[None, None], [None, None]]
        for i in range(2):
            for j in range(2):
                acc = LaurentGerm.zero()
                for k in range(2):
                    acc = acc + self.entries[i][k].mul(other.entries[k][j], w)
                out[i][j] = acc
        return LoopMatrix(out)

    def det(self, w=None):
        a, b = self.entries[0]
        c, d = self.entries[1]
        return a.mul(d, w) - b.mul(c, w)

    def scale_monomial(self, n, col):
        """Multiply column ``col`` by z**n."""
        shift = LaurentGerm.monomial(n, 1.0)
        out = [[self.entries[i][j] if j != col
                else self.entries[i][j].mul(shift, None)
                for j in range(2)] for i in range(2)]
        return LoopMatrix(out)

    def allclose(self, other, tol=1e-9):
        return all(self.entries[i][j].allclose(other.entries[i][j], tol)
                   for i in range(2) for j in range(2))

    def max_abs(self):
        vals = [abs(c) for row in self.entries for g in row
                for _, c in g.items()]
        return max(vals) if vals else 0.0

    def band(self):
        los = [g.n_min for row in self.entries for g in row if not g.is_zero()]
        his = [g.n_max for row in self.entries for g in row if not g.is_zero()]
        if not los:
            return (0, 0)
        return min(los), max(his)

    def to_json(self):
        return {"size": 2,
                "entries": [[g.to_json() for g in row]
                            for row in self.entries]}

    @classmethod
    def from_json(cls, obj):
        if obj.get("size") != 2:
            raise ParseError("only 2x2 loop matrices are supported")
        try:
            rows = obj["entries"]
            return cls([[LaurentGerm.from_json(g) for g in row]
                        for row in rows])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad matrix object: {exc}") from None


class Factorization:
    """Result of a matrix Birkhoff factorization."""

    __slots__ = ("f_plus", "indices", "f_minus")

    def __init__(self, f_plus, indices, f_minus):
        self.f_plus = f_plus
        self.indices = tuple(indices)
        self.f_minus = f_minus

    def middle(self):
        n1, n2 = self.indices
        m = LoopMatrix.identity()
        return LoopMatrix(((LaurentGerm.monomial(n1, 1.0), m[0, 1]),
                           (m[1, 0], LaurentGerm.monomial(n2, 1.0))))

    def reconstruct(self, w=None):
        return self.f_plus.mul(self.middle(), w).mul(self.f_minus, w)


def in_identity_component(F, nsamples=N_SAMPLES):
    """True when det(F) has winding number 0 on the circle."""
    return winding_number(F.det(None), nsamples) == 0


def _solve_minus_factor(F, n1, n2, depth):
    """Least squares solve for G = F_minus**-1 (minus type).

    Requires all negative Fourier coefficients of (F G)[:, i] * z**-n_i
    to vanish.  G is normalized to G(inf) = I when n1 == n2; for
    n1 > n2 the (2,1) entry keeps a free constant (the normalization
    at infinity is then unit lower triangular, the general form the
    sorted indices allow).  Returns (G, residual).
    """
    lo_band, _ = F.band()
    indices = (n1, n2)
    cols = []
    for i in range(2):
        extra = 1 if (i == 0 and n1 > n2) else 0
        nunk = 2 * depth + extra
        e_lo = lo_band - depth
        e_hi = indices[i] - 1
        rows = []
        rhs = []
        for r in range(2):
            for e in range(e_lo, e_hi + 1):
                row = np.zeros(nunk, dtype=complex)
                val = 0j
                for j in range(2):
                    frj = F.entries[r][j]
                    # k = 0 term: G_ji(0) = delta_ji
                    if j == i:
                        val += frj.coeff_at(e)
                    for k in range(-depth, 0):
                        row[j * depth + (k + depth)] += frj.coeff_at(e - k)
                if extra:
                    row[2 * depth] += F.entries[r][1].coeff_at(e)
                rows.append(row)
                rhs.append(-val)
        A = np.array(rows)
        b = np.array(rhs)
        try:
            q, r = np.linalg.qr(A)
            sol = np.linalg.solve(r, q.conj().T @ b)
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(A, b, rcond=None)
        resid = np.linalg.norm(A @ sol - b)
        cols.append((sol, resid))
    entries = [[None, None], [None, None]]
    for i in range(2):
        sol, _ = cols[i]
        for j in range(2):
            coeffs = {k: complex(sol[j * depth + (k + depth)])
                      for k in range(-depth, 0)}
            if j == i:
                coeffs[0] = 1.0
            if j == 1 and i == 0 and n1 > n2:
                coeffs[0] = complex(sol[2 * depth])
            entries[j][i] = LaurentGerm.from_dict(coeffs, COMPLEX)
    G = LoopMatrix(entries)
    return G, max(cols[0][1], cols[1][1])


def _neumann_inverse(G, w):
    """Invert I + N with N strictly minus, exactly within the window."""
    N = [[G.entries[i][j] - (LaurentGerm.one() if i == j
                             else LaurentGerm.zero())
          for j in range(2)] for i in range(2)]
    N = LoopMatrix(N)
    out = LoopMatrix.identity()
    term = LoopMatrix.identity()
    for _ in range(-w.lo):
        term = N.mul(term, w)
        term = LoopMatrix([[t.scale(-1.0) for t in row]
                           for row in term.entries])
        if all(g.is_zero() for row in term.entries for g in row):
            break
        out = LoopMatrix([[out.entries[i][j] + term.entries[i][j]
                           for j in range(2)] for i in range(2)])
    return out


def birkhoff_matrix2(F, w=None, nsamples=2 * N_SAMPLES, tol=1e-9,
                     max_steps=8):
    """Birkhoff factorization ``F = F_plus * diag(z^n1, z^n2) * F_minus``.

    ``F`` must be a 2x2 Laurent-polynomial loop with determinant bounded
    away from zero on the unit circle.  Index candidates are searched from
    the balanced pair outwards; each candidate is validated by the
    reconstruction residual, invertibility of ``F_plus`` at 0 and the
    minus normalization.  Raises :class:`FactorizationFailed` after
    ``max_steps`` candidates.
    """
    det = F.det(None)
    n_total = winding_number(det, max(nsamples, N_SAMPLES))
    scale = max(F.max_abs(), 1e-300)
    lo_band, hi_band = F.band()
    if w is None:
        bw = max(abs(lo_band), abs(hi_band), 1)
        w = window(-8 * bw - 16, 8 * bw + 16)
    depth0 = -w.lo

    def attempt(n1, n2, depth):
        G, resid = _solve_minus_factor(F, n1, n2, depth)
        FG = F.mul(G, None)
        plus = [[None, None], [None, None]]
        for i in range(2):
            for r in range(2):
                g = FG.entries[r][i].mul(
                    LaurentGerm.monomial(-(n1 if i == 0 else n2), 1.0),
                    None)
                plus[r][i] = _chop(LaurentGerm.from_dict(
                    {n: c for n, c in g.items() if n >= 0}))
        F_plus = LoopMatrix(plus)
        det0 = (F_plus[0, 0].coeff_at(0) * F_plus[1, 1].coeff_at(0)
                - F_plus[0, 1].coeff_at(0) * F_plus[1, 0].coeff_at(0))
        if abs(det0) <= 1e-10 * scale * scale:
            return None, resid
        # invert G through its adjugate; det(G) is minus type with
        # value 1 at infinity, so the reciprocal is sampled stably.
        wd = window(-depth, 0)
        det_g = G.det(None)
        det_inv = reciprocal_coeffs(det_g, wd,
                                    nsamples=max(4 * N_SAMPLES, 4 * depth))
        adj = LoopMatrix([[G[1, 1], G[0, 1].scale(-1.0)],
                          [G[1, 0].scale(-1.0), G[0, 0]]])
        F_minus = LoopMatrix([[_chop(adj[i, j].mul(det_inv, wd))
                               for j in range(2)] for i in range(2)])
        fact = Factorization(F_plus, (n1, n2), F_minus)
        recon = fact.reconstruct(None)
        err = max(max((abs(c) for _, c in
                       (recon[i, j] - F[i, j]).items()), default=0.0)
                  for i in range(2) for j in range(2))
        return fact, err

    # rank index candidates by the defect of the minus-factor system at
    # a moderate depth, then refine the most promising ones.
    n1_base = -(-n_total // 2)  # ceil
    ranked = []
    for step in range(max_steps):
        n1 = n1_base + step
        _, resid = _solve_minus_factor(F, n1, n_total - n1, depth0)
        ranked.append((resid, n1))
    ranked.sort()
    for _, n1 in ranked[:3]:
        n2 = n_total - n1
        depth = depth0
        for _ in range(5):
            fact, err = attempt(n1, n2, depth)
            if fact is not None and err <= tol:
                return fact
            depth *= 2
    raise FactorizationFailed(
        f"no index candidate within {max_steps} steps of the balanced pair")
