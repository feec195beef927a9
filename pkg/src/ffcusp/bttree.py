"""The Bruhat-Tits tree of PGL_2 over F_q((X^-1)).

Write pi = X^-1 for the uniformizer of O = F_q[[pi]].  Every homothety class
of O-lattices has exactly one basis of the form

    [[pi^m, u],
     [0,    1]]      (columns span the lattice)

with m an integer and u a Laurent polynomial taken mod pi^m O.  A
``TreeVertex`` stores (level=m, center=u).  Moving toward the boundary point
infinity lowers the level by one and forgets the last digit of the center;
the q other neighbours append a digit.  Consequently:

* the Busemann function toward infinity is the level,
* the horoball HB_inf through [O^2] is {level <= 0},
* two vertices' rays to infinity merge at level min(m1, m2, v(u1 - u2)).

The boundary P^1(K^) is identified with K^ u {inf} through (x:y) -> x/y; the
ray (m, xi mod pi^m), m -> +inf, converges to xi.
"""

from dataclasses import dataclass

from .algebra import Polynomial
from .errors import PrecisionExhausted
from .laurent import (
    DEFAULT_PREC,
    INF,
    PREC_CAP,
    FunctionSource,
    LaurentSeries,
    SeriesSource,
    refine,
)


def _as_series(field, x):
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, Polynomial):
        return LaurentSeries.from_polynomial(x)
    if isinstance(x, int):
        return LaurentSeries.constant(field, field.reduce(x))
    raise TypeError(f'cannot use {type(x).__name__} as a matrix entry')


class Mat2:
    """2x2 matrix over K^ with LaurentSeries entries [[a, b], [c, d]]."""

    __slots__ = ('field', 'a', 'b', 'c', 'd')

    def __init__(self, field, a, b, c, d):
        self.field = field
        self.a, self.b, self.c, self.d = (_as_series(field, x) for x in (a, b, c, d))

    @classmethod
    def identity(cls, field):
        return cls(field, 1, 0, 0, 1)

    @classmethod
    def diag(cls, field, x, y):
        return cls(field, x, 0, 0, y)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def rows(self):
        return (self.a, self.b), (self.c, self.d)

    def is_exact(self):
        return all(e.is_exact() for e in self.entries)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mat2(self.field, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def scale(self, s):
        s = _as_series(self.field, s)
        return Mat2(self.field, *(s * x for x in self.entries))

    def adjugate(self):
        return Mat2(self.field, self.d, -self.b, -self.c, self.a)

    def inverse(self, prec=None):
        dinv = self.det().invert(prec)
        return self.adjugate().scale(dinv)

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.entries == other.entries

    def __repr__(self):
        return 'Mat2([[{}, {}], [{}, {}]])'.format(*self.entries)


class _FixedSource(SeriesSource):
    def __init__(self, s):
        self.s = s

    def series(self, prec):
        return self.s.truncate(prec) if prec < self.s.prec else self.s


class BoundaryPoint:
    """A point of P^1(K^): infinity or an element of K^ backed by a source
    that can be asked for more digits."""

    __slots__ = ('source', 'field')

    def __init__(self, field, source=None):
        self.field = field
        if isinstance(source, LaurentSeries):
            source = _FixedSource(source)
        elif isinstance(source, Polynomial):
            source = _FixedSource(LaurentSeries.from_polynomial(source))
        self.source = source

    @classmethod
    def infinity(cls, field):
        return cls(field, None)

    @property
    def is_infinity(self):
        return self.source is None

    def series(self, prec):
        if self.source is None:
            raise ValueError('infinity has no series')
        return self.source.series(prec)

    def __repr__(self):
        if self.is_infinity:
            return 'BoundaryPoint(inf)'
        return f'BoundaryPoint({self.source!r})'


@dataclass(frozen=True)
class TreeVertex:
    field: object
    level: int
    center: LaurentSeries

    @classmethod
    def make(cls, field, level, center=None):
        """Canonicalize: keep only the digits of ``center`` below ``level``."""
        if center is None:
            center = LaurentSeries.zero(field)
        if center.prec < level:
            raise PrecisionExhausted(f'center known to X^-{center.prec}, need X^-{level}')
        cs = center.coeffs[:max(0, level - center.start)] if center.coeffs else ()
        start = center.start if cs else INF
        return cls(field, level, LaurentSeries(field, start, cs))

    @classmethod
    def standard(cls, field, n=0):
        """[O x X^-n O], the n-th vertex of the ray from [O^2] to infinity."""
        return cls.make(field, -n)

    def matrix(self):
        F = self.field
        return Mat2(F, LaurentSeries.x_power(F, -self.level), self.center, 0, 1)

    def parent(self):
        """The neighbour toward infinity."""
        return TreeVertex.make(self.field, self.level - 1, self.center)

    def children(self):
        F = self.field
        m = self.level
        return [TreeVertex.make(F, m + 1, self.center + LaurentSeries(F, m, (c,)))
                for c in range(F.q)]

    def neighbors(self):
        return [self.parent()] + self.children()

    def __repr__(self):
        return f'TreeVertex(level={self.level}, center={self.center})'


def vertex_from_matrix(M):
    """Canonical vertex of the lattice spanned by the columns of M."""
    a, b, c, d = M.entries
    if d.coeffs and d.start <= c.val_bound:
        top, piv = b, d
    elif c.coeffs and c.start < d.val_bound:
        top, piv = a, c
    elif c.is_known_zero() and d.is_known_zero():
        raise ValueError('singular matrix')
    else:
        raise PrecisionExhausted('bottom row has no certified leading term')
    det = M.det()
    if det.is_known_zero():
        raise ValueError('singular matrix')
    level = det.valuation - 2 * piv.start
    if top.is_known_zero():
        return TreeVertex.make(M.field, level)
    center = top * piv.invert(prec=level - top.val_bound)
    return TreeVertex.make(M.field, level, center)


def vertex_level(M):
    """Level (Busemann value toward infinity) of the vertex of M, which needs
    fewer digits than the full canonical form."""
    a, b, c, d = M.entries
    det = M.det()
    if det.is_known_zero():
        raise ValueError('singular matrix')
    if c.is_known_zero() and d.is_known_zero():
        raise ValueError('singular matrix')
    lo = min(c.val_bound, d.val_bound)
    if not ((c.coeffs and c.start == lo) or (d.coeffs and d.start == lo)):
        raise PrecisionExhausted('bottom row has no certified leading term')
    return det.valuation - 2 * lo


def smith_gap(M):
    """|a - b| for the Smith exponents (pi^a, pi^b) of M over O, i.e. the
    distance from [O^2] to the vertex of M."""
    vmin = min(e.val_bound for e in M.entries)
    if not any(e.coeffs and e.start == vmin for e in M.entries):
        raise PrecisionExhausted('no entry has a certified leading term')
    det = M.det()
    if det.is_known_zero():
        raise ValueError('singular matrix')
    return det.valuation - 2 * vmin


def _merge_level(v1, v2):
    diff = v1.center - v2.center
    return min(v1.level, v2.level, diff.valuation)


def tree_distance(v1, v2):
    """Edge distance: levels above the common ancestor toward infinity."""
    m = _merge_level(v1, v2)
    return v1.level + v2.level - 2 * m


def _confluence(v, xi):
    """min(level, v(center - xi)): where the ray from v to infinity meets the
    line (infinity, xi)."""
    diff = (v.center - xi).truncate(v.level)
    if diff.coeffs:
        return diff.start
    if diff.prec < v.level:
        raise PrecisionExhausted('boundary point not known deep enough')
    return v.level


def busemann(xi, x, y, prec=DEFAULT_PREC):
    """beta_xi(x, y) = lim d(x, xi_t) - d(y, xi_t)."""
    if xi.is_infinity:
        return x.level - y.level

    def compute(p):
        s = xi.series(max(p, x.level, y.level))
        return (x.level - 2 * _confluence(x, s)) - (y.level - 2 * _confluence(y, s))

    return refine(compute, start=prec)


def busemann_infty(v):
    """beta_inf(v, [O^2])."""
    return v.level


def depth_infty(v):
    """How deep v sits inside HB_inf; [O x X^-n O] has depth n."""
    return max(0, -v.level)


def geodesic_step(v, xi, prec=DEFAULT_PREC):
    """The neighbour of v one step closer to the boundary point xi."""
    if xi.is_infinity:
        return v.parent()
    m = v.level

    def compute(p):
        s = xi.series(max(p, m + 1))
        if _confluence(v, s) < m:
            return v.parent()
        return TreeVertex.make(v.field, m + 1, s)

    return refine(compute, start=prec)


def geodesic_ray(v, xi, steps, prec=DEFAULT_PREC):
    out = [v]
    for _ in range(steps):
        v = geodesic_step(v, xi, prec)
        out.append(v)
    return out


def mobius(g, x, prec):
    """g . x for a series x (None stands for infinity); returns a series or
    None for infinity, certified as far as the inputs allow."""
    a, b, c, d = g.entries
    if x is None:
        if c.is_known_zero():
            return None
        return a * c.invert(prec=prec - a.val_bound)
    num = a * x + b
    den = c * x + d
    if den.is_known_zero():
        return None
    if not den.coeffs:
        raise PrecisionExhausted('cannot tell whether x is the pole of g')
    return (num * den.invert(prec=prec - num.val_bound)).truncate(prec)


def apply_mat(g, x, prec=DEFAULT_PREC):
    """Act by g on a TreeVertex (isometrically) or a BoundaryPoint (projectively)."""
    if isinstance(x, TreeVertex):
        return vertex_from_matrix(g @ x.matrix())
    if isinstance(x, BoundaryPoint):
        F = x.field
        if x.is_infinity:
            img = mobius(g, None, prec)
            return BoundaryPoint(F) if img is None else BoundaryPoint(F, img)

        def compute(p):
            img = mobius(g, x.series(p), p)
            if img is None:
                raise ZeroDivisionError
            return img

        try:
            compute(prec)
        except ZeroDivisionError:
            return BoundaryPoint(F)
        except PrecisionExhausted:
            pass
        return BoundaryPoint(F, FunctionSource(compute))
    raise TypeError('apply_mat acts on TreeVertex or BoundaryPoint')


def _to_infinity_images(eta1, eta2, xi, base, p):
    """Move xi to infinity with h = [[0, 1], [1, -xi]] (h . x = 1/(x - xi)) and
    return (level of h.base, v(h.eta1 - h.eta2))."""
    F = base.field
    s = xi.series(p)
    h = Mat2(F, 0, 1, 1, -s)
    level = vertex_level(h @ base.matrix())
    x1 = eta1.series(p) - s
    x2 = eta2.series(p) - s
    if not x1.coeffs or not x2.coeffs:
        raise PrecisionExhausted('eta too close to xi_star at this precision')
    diff = x2 - x1
    if diff.is_known_zero():
        return level, INF
    return level, diff.valuation - x1.valuation - x2.valuation


def branch_time(eta1, eta2, xi_star, base, prec=DEFAULT_PREC, cap=PREC_CAP):
    """First backward time at which the geodesics from ``xi_star`` to ``eta1``
    and ``eta2`` coincide, time 0 being the horosphere centred at ``xi_star``
    through ``base``."""
    if xi_star.is_infinity:
        def compute(p):
            if eta1.is_infinity or eta2.is_infinity:
                raise ValueError('eta must differ from xi_star')
            diff = eta1.series(p) - eta2.series(p)
            if diff.is_known_zero():
                return 0
            return max(0, base.level - diff.valuation)
        return refine(compute, start=prec, cap=cap)

    def compute(p):
        if eta1.is_infinity or eta2.is_infinity:
            # h sends infinity to 0
            other = eta2 if eta1.is_infinity else eta1
            if other.is_infinity:
                return 0
            s = xi_star.series(p)
            h = Mat2(base.field, 0, 1, 1, -s)
            level = vertex_level(h @ base.matrix())
            x = other.series(p) - s
            return max(0, level + x.valuation)
        level, v = _to_infinity_images(eta1, eta2, xi_star, base, p)
        if v == INF:
            return 0
        return max(0, level - v)

    return refine(compute, start=prec, cap=cap)
