"""Reduction of O-lattices under SL_2(A) and the cusp-depth invariant.

A lattice is given by a 2x2 matrix M over K^; SL_2(A) acts on the left, so
gamma mixes the *rows* of M with polynomial coefficients.  Write
||r|| = max(|r_x|, |r_y|) and lambda_1 <= lambda_2 for the successive minima
of the row module A r1 + A r2.  Then:

* the Smith gap of M (the tree distance from [O^2] to the vertex of M) is
  v(det M) + 2 log_q max(||r1||, ||r2||);
* minimising over gamma in SL_2(A) gives v(det) + 2 log_q lambda_2, and since
  lambda_1 lambda_2 = q^-v(det), this is log_q(lambda_2 / lambda_1);
* the SL_2(A)-orbit of a vertex meets the ray [O x X^-n O] exactly once, at
  distance n from [O^2], which is the closest orbit point.  So Delta is the
  successive-minima gap.

Over the ultrametric A a two-row basis reaching both minima is found by a
Gauss/Lagrange loop in which each step is one Euclidean division.  The
brute-force oracle below minimises the Smith gap over every gamma with small
entry degrees, independently of that argument.
"""

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import Polynomial, congruent_mod, xgcd
from .bttree import Mat2, TreeVertex, vertex_from_matrix
from .errors import BudgetExceeded, PrecisionExhausted
from .laurent import INF, LaurentSeries, integral_fractional

BRUTE_FORCE_BUDGET = 3 ** 16


def _norm_exp(row):
    """log_q ||row||, i.e. -min(v(x), v(y))."""
    lo = min(e.val_bound for e in row)
    if lo == INF:
        raise ValueError('zero row')
    if not any(e.coeffs and e.start == lo for e in row):
        raise PrecisionExhausted('row norm not certified')
    return -lo


def _dominant(row):
    """Index of the first coordinate attaining the row norm."""
    lo = min(e.val_bound for e in row)
    for j, e in enumerate(row):
        if e.coeffs and e.start == lo:
            return j
    raise PrecisionExhausted('row norm not certified')


@dataclass
class ALatticeBasis:
    """Rows r1, r2 of a lattice matrix."""

    r1: tuple
    r2: tuple
    detval: int = field(init=False)

    def __post_init__(self):
        self.r1, self.r2 = tuple(self.r1), tuple(self.r2)
        det = self.r1[0] * self.r2[1] - self.r1[1] * self.r2[0]
        if det.is_known_zero():
            raise ValueError('singular lattice basis')
        self.detval = det.valuation

    @classmethod
    def from_matrix(cls, M):
        return cls((M.a, M.b), (M.c, M.d))

    @property
    def field(self):
        return self.r1[0].field

    def to_matrix(self):
        return Mat2(self.field, *self.r1, *self.r2)

    def norms(self):
        return _norm_exp(self.r1), _norm_exp(self.r2)


@dataclass
class ReductionResult:
    gamma0: tuple     # ((a, b), (c, d)) Polynomials, det 1
    delta: int
    minima: tuple     # (log_q lambda_1, log_q lambda_2)
    certified: bool
    steps: int = 0

    def gamma_matrix(self, F):
        (a, b), (c, d) = self.gamma0
        return Mat2(F, a, b, c, d)


def _poly_mat_mul(g, h):
    (a, b), (c, d) = g
    (e, f), (x, y) = h
    return ((a * e + b * x, a * f + b * y), (c * e + d * x, c * f + d * y))


def gauss_reduce(L):
    """Reduce the row module of L; the longer reduced row comes first so that
    gamma0 . [L] is the vertex [O x X^-delta O] on the standard ray."""
    if isinstance(L, Mat2):
        L = ALatticeBasis.from_matrix(L)
    F = L.field
    one, zero = Polynomial.one(F), Polynomial.zero(F)
    gamma = ((one, zero), (zero, one))
    r1, r2 = L.r1, L.r2
    n1, n2 = _norm_exp(r1), _norm_exp(r2)
    if n1 > n2:
        # J = [[0, 1], [-1, 0]]
        r1, r2 = r2, tuple(-e for e in r1)
        n1, n2 = n2, n1
        gamma = ((zero, one), (-one, zero))
    steps = 0
    while True:
        j = _dominant(r1)
        num = r2[j]
        if num.is_known_zero():
            break
        ratio = num * r1[j].invert(prec=1 - num.val_bound)
        a = integral_fractional(ratio)[0]
        if not a:
            break
        steps += 1
        ls = LaurentSeries.from_polynomial(a)
        r2 = tuple(y - ls * x for x, y in zip(r1, r2))
        gamma = ((gamma[0][0], gamma[0][1]),
                 (gamma[1][0] - a * gamma[0][0], gamma[1][1] - a * gamma[0][1]))
        n2 = _norm_exp(r2)
        if n2 < n1:
            r1, r2 = r2, tuple(-e for e in r1)
            n1, n2 = n2, n1
            gamma = (gamma[1], (-gamma[0][0], -gamma[0][1]))
    # longer row first
    gamma = (gamma[1], (-gamma[0][0], -gamma[0][1]))
    return ReductionResult(gamma, n2 - n1, (n1, n2), True, steps)


def _as_matrix(x):
    if isinstance(x, TreeVertex):
        return x.matrix()
    if isinstance(x, ALatticeBasis):
        return x.to_matrix()
    return x


def delta_invariant(x):
    """Delta of a vertex or lattice matrix."""
    return gauss_reduce(_as_matrix(x)).delta


def _sl2_fq(F):
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)) == 1:
            yield a, b, c, d


def congruence_witness(M, Qstar):
    """gamma in Gamma^0_{Q*} (lower-left entry divisible by Q*) sending the
    lattice of M to its point [O x X^-n O] on the standard ray, or None.

    Any two such gamma differ by the stabiliser of that vertex in SL_2(A):
    upper triangular with constant diagonal and deg b <= n when n >= 1,
    SL_2(F_q) when n = 0.  Only the lower-left entry matters, and the
    stabiliser changes it by a unit (n >= 1) or to c a0 + d c0 (n = 0).
    """
    if not Qstar:
        raise ZeroDivisionError('Q* must be nonzero')
    M = _as_matrix(M)
    res = gauss_reduce(M)
    (a0, b0), (c0, d0) = res.gamma0
    if res.delta >= 1:
        if congruent_mod(c0, Qstar):
            return res.gamma0
        return None
    F = M.field
    for a, b, c, d in _sl2_fq(F):
        lower = a0.scale(c) + c0.scale(d)
        if congruent_mod(lower, Qstar):
            top = (a0.scale(a) + c0.scale(b), b0.scale(a) + d0.scale(b))
            return (top, (lower, b0.scale(c) + d0.scale(d)))
    return None


def delta_congruence(M, Qstar):
    """Delta_{Q*}: Delta when some gamma in Gamma^0_{Q*} carries the lattice
    onto the standard ray, 0 otherwise (so always 0 when Delta = 0)."""
    if not Qstar:
        raise ZeroDivisionError('Q* must be nonzero')
    M = _as_matrix(M)
    res = gauss_reduce(M)
    if res.delta == 0:
        return 0
    return res.delta if congruent_mod(res.gamma0[1][0], Qstar) else 0


# -- brute force -------------------------------------------------------------

def _encode(cs, q):
    n = 0
    for c in reversed(cs):
        n = n * q + c
    return n


@functools.lru_cache(maxsize=8)
def _sl2_table(q, cap):
    """All gamma in SL_2(F_q[X]) with entry degrees <= cap, as index arrays
    (row1, row2) into the list of pairs (a, b), pair index = code(a) * q^(cap+1)
    + code(b) with code() the base-q reading of the coefficient vector."""
    from .algebra import GF
    F = GF(q)
    p = F.p
    width = cap + 1
    polys = [Polynomial(F, cs) for cs in itertools.product(range(q), repeat=width)]
    # itertools.product varies the last position fastest; code() reads
    # coefficient k with weight q^k, so build the code table explicitly
    codes = {P: _encode(list(P.coeffs) + [0] * (width - len(P.coeffs)), q) for P in polys}
    # k-multiples table: coefficient vectors for every k with deg k <= cap
    kcoef = np.array([list(cs) for cs in itertools.product(range(q), repeat=width)], dtype=np.int64)
    weights = q ** np.arange(width, dtype=np.int64)
    rows1, rows2 = [], []
    for a in polys:
        for b in polys:
            if not a and not b:
                continue
            g, s, t = xgcd(a, b)
            if g.deg != 0:
                continue
            # s a + t b = 1 with g = 1 after normalisation, so (c, d) = (-t, s)
            c, d = -t, s
            if a.deg >= b.deg:
                k, c = divmod(c, a)
                d = d - k * b
            else:
                k, d = divmod(d, b)
                c = c - k * a
            m = max(a.deg, b.deg)
            free = cap - m + 1
            ks = kcoef[np.all(kcoef[:, free:] == 0, axis=1)] if free < width else kcoef
            cvec = _mul_table(ks, a, width, p) + _pad(c, width)
            dvec = _mul_table(ks, b, width, p) + _pad(d, width)
            cvec %= p
            dvec %= p
            idx2 = (cvec @ weights) * q ** width + dvec @ weights
            rows1.append(np.full(len(ks), codes[a] * q ** width + codes[b], dtype=np.int64))
            rows2.append(idx2)
    return np.concatenate(rows1), np.concatenate(rows2)


def _pad(P, width):
    out = np.zeros(width, dtype=np.int64)
    out[:len(P.coeffs)] = P.coeffs
    return out


def _mul_table(ks, a, width, p):
    """Coefficients (truncated to ``width``) of k * a for each row k of ks."""
    out = np.zeros((len(ks), width), dtype=np.int64)
    for i, c in enumerate(a.coeffs):
        if c:
            out[:, i:] += c * ks[:, :width - i]
    return out % p


def sl2_count(q, cap):
    return len(_sl2_table(q, cap)[0])


def _poly_entries(M):
    """Scale M by a power of X so every entry is a polynomial; returns the
    coefficient lists and the field."""
    if not M.is_exact():
        raise ValueError('brute force needs exact (Laurent polynomial) entries')
    ents = M.entries
    top = max((e.end for e in ents if e.coeffs), default=0)
    s = max(top - 1, 0)
    return [e.shift(s).to_polynomial() for e in ents]


def _vector_degrees(r, q, p, width):
    """deg of x * r for every polynomial x with deg <= cap (code order)."""
    xs = np.array([list(cs) for cs in _code_order(q, width)], dtype=np.int64)
    L = width + max(len(r.coeffs), 1)
    out = np.zeros((len(xs), L), dtype=np.int64)
    for i, c in enumerate(r.coeffs):
        if c:
            out[:, i:i + width] += c * xs
    return out % p


@functools.lru_cache(maxsize=8)
def _code_order(q, width):
    """Coefficient vectors listed by code (coefficient k has weight q^k)."""
    out = []
    for n in range(q ** width):
        cs = []
        for _ in range(width):
            n, c = divmod(n, q)
            cs.append(c)
        out.append(tuple(cs))
    return tuple(out)


def _degrees(arr):
    nz = arr != 0
    last = arr.shape[-1] - 1 - np.argmax(nz[..., ::-1], axis=-1)
    return np.where(nz.any(axis=-1), last, -(10 ** 9))


def brute_force_delta(M, degcap, Qstar=None, budget=BRUTE_FORCE_BUDGET):
    """Minimal Smith gap of gamma M over gamma in SL_2(A) with entry degrees
    <= degcap.  With Q*, returns that minimum n if some minimiser in
    Gamma^0_{Q*} sends M to [O x X^-n O] itself, else 0."""
    M = _as_matrix(M)
    F = M.field
    if F.e != 1:
        raise NotImplementedError('brute force is implemented over prime fields')
    q = F.q
    if q ** (4 * (degcap + 1)) > budget:
        raise BudgetExceeded(f'q^(4(degcap+1)) = {q ** (4 * (degcap + 1))} exceeds budget {budget}')
    if Qstar is not None and not Qstar:
        raise ZeroDivisionError('Q* must be nonzero')
    width = degcap + 1
    ra, rb, rc, rd = _poly_entries(M)
    det = ra * rd - rb * rc
    if not det:
        raise ValueError('singular matrix')
    row1, row2 = _sl2_table(q, degcap)
    # norm of x r1 + y r2 for every (x, y), indexed x_code * q^width + y_code
    X1 = _vector_degrees(ra, q, F.p, width)
    Y1 = _vector_degrees(rb, q, F.p, width)
    X2 = _vector_degrees(rc, q, F.p, width)
    Y2 = _vector_degrees(rd, q, F.p, width)
    Lx = max(X1.shape[1], X2.shape[1])
    Ly = max(Y1.shape[1], Y2.shape[1])
    X1, X2 = _widen(X1, Lx), _widen(X2, Lx)
    Y1, Y2 = _widen(Y1, Ly), _widen(Y2, Ly)
    n = q ** width
    dx = _degrees((X1[:, None, :] + X2[None, :, :]) % F.p).reshape(n * n)
    dy = _degrees((Y1[:, None, :] + Y2[None, :, :]) % F.p).reshape(n * n)
    norm = np.maximum(dx, dy)
    gnorm = np.maximum(norm[row1], norm[row2])
    best = int(gnorm.min())
    # shifting by X^s scales det by X^2s, which the gap ignores
    gap = -det.deg + 2 * best
    if Qstar is None or gap == 0:
        return gap if Qstar is None else 0
    codes = _code_order(q, width)
    divisible = np.array([congruent_mod(Polynomial(F, cs), Qstar) for cs in codes])
    cand = np.nonzero((gnorm == best) & divisible[row2 // n])[0]
    target = TreeVertex.standard(F, gap)
    for i in cand:
        a = Polynomial(F, codes[row1[i] // n])
        b = Polynomial(F, codes[row1[i] % n])
        c = Polynomial(F, codes[row2[i] // n])
        d = Polynomial(F, codes[row2[i] % n])
        if vertex_from_matrix(Mat2(F, a, b, c, d) @ M) == target:
            return gap
    return 0


def _widen(arr, L):
    if arr.shape[1] == L:
        return arr
    out = np.zeros((arr.shape[0], L), dtype=np.int64)
    out[:, :arr.shape[1]] = arr
    return out


def unipotent_lattice(f, g, prec=None):
    """u_g = gamma_f (1 g; 0 1) gamma_f^-1 with gamma_f = (1 0; 1/f 1), i.e.

        [[1 - g/f,  g      ],
         [-g/f^2,   1 + g/f]].

    ``f`` is a LaurentSeries (already truncated) or a SeriesSource sampled at
    ``prec``; horizons propagate through 1/f and 1/f^2.
    """
    if not isinstance(f, LaurentSeries):
        f = f.series(prec)
    F = f.field
    if not isinstance(g, LaurentSeries):
        g = LaurentSeries.from_polynomial(g) if isinstance(g, Polynomial) else g
    finv = f.invert(prec)
    t = g * finv
    return Mat2(F, 1 - t, g, -(t * finv), 1 + t)


def gamma_f(f, prec=None):
    if not isinstance(f, LaurentSeries):
        f = f.series(prec)
    return Mat2(f.field, 1, 0, f.invert(prec), 1)
