"""Truncated formal Laurent series in X^-1 over F_q with certified precision.

A ``LaurentSeries`` stands for

    sum_{i = start}^{prec - 1} c_i X^{-i}  +  O(X^{-prec})

so ``start`` is the valuation v_inf whenever some coefficient is known to be
nonzero, and ``prec`` is the first exponent whose coefficient is unknown
(``math.inf`` for exact values).  Every operation returns the horizon that
ultrametric error propagation actually certifies, nothing more.

Two zero states are kept apart: an exact zero (``is_known_zero``) and a
value with no nonzero digit below its horizon (``is_zero_to_precision``).
Only the former has a valuation.
"""

import math

import numpy as np

from .algebra import NEG_INF, Polynomial, RationalFunction, conv
from .errors import PrecisionExhausted

INF = math.inf

DEFAULT_PREC = 64
PREC_CAP = 2 ** 14


class LaurentSeries:
    __slots__ = ('field', 'start', 'coeffs', 'prec')

    def __init__(self, field, start, coeffs, prec=INF):
        coeffs = list(coeffs)
        if prec != INF:
            keep = prec - start
            if keep < len(coeffs):
                del coeffs[max(keep, 0):]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if k:
            del coeffs[:k]
            start += k
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            start = prec
        self.field = field
        self.start = start
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, prec=INF):
        return cls(field, prec, (), prec)

    @classmethod
    def one(cls, field):
        return cls(field, 0, (1,))

    @classmethod
    def constant(cls, field, c):
        return cls(field, 0, (c,))

    @classmethod
    def x_power(cls, field, n, c=1):
        """Exact c * X**n (n may be negative)."""
        return cls(field, -n, (c,))

    @classmethod
    def from_polynomial(cls, f):
        if not f:
            return cls.zero(f.field)
        return cls(f.field, -f.deg, tuple(reversed(f.coeffs)))

    @classmethod
    def from_terms(cls, field, terms, prec=INF):
        """Build from a mapping {exponent i: coefficient of X^-i}."""
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms)
        cs = [0] * (hi - lo + 1)
        for i, c in terms.items():
            cs[i - lo] = c
        return cls(field, lo, cs, prec)

    # -- state ---------------------------------------------------------------

    def is_exact(self):
        return self.prec == INF

    def is_known_zero(self):
        return not self.coeffs and self.prec == INF

    def is_zero_to_precision(self):
        return not self.coeffs and self.prec != INF

    @property
    def valuation(self):
        """v_inf; ``inf`` for exact zero.  Raises if no digit is certified."""
        if self.coeffs:
            return self.start
        if self.prec == INF:
            return INF
        raise PrecisionExhausted(f'valuation unknown: series is O(X^-{self.prec})')

    @property
    def val_bound(self):
        """A certified lower bound for the valuation."""
        return self.start if self.coeffs else self.prec

    @property
    def degree(self):
        """-v_inf, i.e. log_q |f| (``-inf`` for exact zero)."""
        v = self.valuation
        return NEG_INF if v == INF else -v

    @property
    def lead(self):
        self.valuation
        return self.coeffs[0] if self.coeffs else 0

    @property
    def end(self):
        """One past the last stored exponent."""
        return self.start + len(self.coeffs) if self.coeffs else self.prec

    def coefficient(self, i):
        """Coefficient of X^-i."""
        if i >= self.prec:
            raise PrecisionExhausted(f'coefficient of X^-{i} is beyond the horizon {self.prec}')
        j = i - self.start
        if self.coeffs and 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field == other.field and self.prec == other.prec
                and self.coeffs == other.coeffs
                and (not self.coeffs or self.start == other.start))

    def __hash__(self):
        return hash((self.field, self.start if self.coeffs else None, self.coeffs, self.prec))

    def __repr__(self):
        return f'LaurentSeries({self.field!r}, {self.start}, {self.coeffs}, {self.prec})'

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                i = self.start + k
                mono = '1' if i == 0 else ('X' if i == -1 else f'X^{-i}')
                terms.append(mono if c == 1 and i != 0 else (f'{c}' if i == 0 else f'{c}*{mono}'))
        if self.prec != INF:
            terms.append(f'O(X^{-self.prec})')
        return '+'.join(terms) if terms else '0'

    def agrees_with(self, other, upto=None):
        """True iff the two series have identical digits below ``upto``
        (default: the smaller horizon)."""
        h = min(self.prec, other.prec) if upto is None else upto
        if h > min(self.prec, other.prec):
            raise PrecisionExhausted('comparison horizon exceeds certified digits')
        d = (self - other).truncate(h)
        return not d.coeffs

    # -- arithmetic ----------------------------------------------------------

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return LaurentSeries(self.field, self.start, self.coeffs, prec)

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.field != self.field:
                raise ValueError('series over different fields')
            return other
        if isinstance(other, Polynomial):
            return LaurentSeries.from_polynomial(other)
        if isinstance(other, int):
            return LaurentSeries.constant(self.field, self.field.reduce(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec, other.prec)
        if not other.coeffs:
            return self.truncate(prec)
        if not self.coeffs:
            return other.truncate(prec)
        lo = min(self.start, other.start)
        hi = max(self.end, other.end)
        if hi > prec:
            hi = prec
        if hi <= lo:
            return LaurentSeries.zero(self.field, prec)
        F = self.field
        out = [0] * (hi - lo)
        for s in (self, other):
            off = s.start - lo
            n = min(len(s.coeffs), hi - s.start)
            if F.e == 1:
                for k in range(n):
                    out[off + k] += s.coeffs[k]
            else:
                for k in range(n):
                    out[off + k] = F.add(out[off + k], s.coeffs[k])
        if F.e == 1:
            p = F.p
            out = [c % p for c in out]
        return LaurentSeries(F, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        if F.e == 1:
            cs = [-c % F.p for c in self.coeffs]
        else:
            cs = [F.neg(c) for c in self.coeffs]
        return LaurentSeries(F, self.start, cs, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def scale(self, c):
        F = self.field
        if F.e == 1:
            cs = [x * c % F.p for x in self.coeffs]
        else:
            cs = [F.mul(x, c) for x in self.coeffs]
        return LaurentSeries(F, self.start, cs, self.prec)

    def shift(self, n):
        """Multiply by X**n."""
        return LaurentSeries(self.field, self.start - n, self.coeffs, self.prec - n)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        va, vb = self.val_bound, other.val_bound
        prec = min(va + other.prec, vb + self.prec)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(self.field, prec)
        start = self.start + other.start
        a, b = self.coeffs, other.coeffs
        if prec != INF:
            n = prec - start
            if n <= 0:
                return LaurentSeries.zero(self.field, prec)
            a, b = a[:n], b[:n]
        return LaurentSeries(self.field, start, conv(self.field, a, b), prec)

    __rmul__ = __mul__

    def invert(self, prec=None):
        """1/f.  The horizon is ``self.prec - 2 v``; for exact input that is
        infinite and ``prec`` (default: DEFAULT_PREC digits past the leading
        one) bounds the output instead."""
        if self.is_known_zero():
            raise ZeroDivisionError('inversion of exact zero')
        if not self.coeffs:
            raise PrecisionExhausted('inversion of a series that is zero to its precision')
        v = self.start
        F = self.field
        if self.is_exact() and len(self.coeffs) == 1:
            return LaurentSeries(F, -v, (F.inv(self.coeffs[0]),))
        rel = self.prec - v
        if prec is not None:
            rel = min(rel, prec + v)
        elif rel == INF:
            rel = DEFAULT_PREC
        if rel <= 0:
            return LaurentSeries.zero(F, -v + rel)
        return LaurentSeries(F, -v, _series_inverse(F, self.coeffs, rel), -v + rel)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.invert()

    def sqrt(self, prec=None):
        """A square root; None when the valuation is odd or the leading
        coefficient is not a square.  Requires odd characteristic.

        The horizon is ``self.prec - v/2``; ``prec`` caps it (and bounds
        the output of exact input)."""
        F = self.field
        if F.p == 2:
            raise ValueError('series square roots need odd characteristic')
        if self.is_known_zero():
            return self
        v = self.valuation
        if v % 2:
            return None
        s0 = F.sqrt(self.coeffs[0])
        if s0 is None:
            return None
        rel = self.prec - v
        if prec is not None:
            rel = min(rel, prec - v // 2)
        elif rel == INF:
            rel = DEFAULT_PREC
        if rel <= 0:
            return LaurentSeries.zero(F, v // 2 + rel)
        return LaurentSeries(F, v // 2, _series_sqrt(F, self.coeffs, s0, rel), v // 2 + rel)

    def integral_part(self):
        return integral_fractional(self)[0]

    def fractional_part(self):
        return integral_fractional(self)[1]

    def to_polynomial(self):
        """Exact series with no negative X-powers -> Polynomial."""
        if not self.is_exact():
            raise ValueError('only exact series convert to polynomials')
        if not self.coeffs:
            return Polynomial.zero(self.field)
        if self.end > 1:
            raise ValueError('series has terms in X^-1')
        cs = [0] * (-self.start + 1)
        for k, c in enumerate(self.coeffs):
            cs[-(self.start + k)] = c
        return Polynomial(self.field, cs)


def _series_inverse(F, u, n):
    """First n coefficients of 1/u for a power series u with u[0] != 0."""
    inv0 = F.inv(u[0])
    if F.e == 1:
        p = F.p
        c = np.zeros(n, dtype=np.int64)
        m = min(n, len(u))
        c[:m] = u[:m]
        b = np.zeros(n, dtype=np.int64)
        b[0] = inv0
        neg_inv0 = -inv0 % p
        for k in range(1, n):
            j = min(k, m - 1)
            if j:
                b[k] = int(np.dot(c[1:j + 1], b[k - j:k][::-1])) * neg_inv0 % p
        return [int(x) for x in b]
    b = [inv0]
    ninv = F.neg(inv0)
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(u) - 1) + 1):
            if u[j]:
                s = F.add(s, F.mul(u[j], b[k - j]))
        b.append(F.mul(s, ninv))
    return b


def _series_sqrt(F, u, s0, n):
    """First n coefficients of a square root of the power series u (u[0] = s0^2)."""
    inv2s0 = F.inv(F.add(s0, s0))
    s = [s0]
    if F.e == 1:
        p = F.p
        arr = np.zeros(n, dtype=np.int64)
        arr[0] = s0
        for k in range(1, n):
            uk = u[k] if k < len(u) else 0
            acc = int(np.dot(arr[1:k], arr[k - 1:0:-1])) if k > 1 else 0
            arr[k] = (uk - acc) * inv2s0 % p
        return [int(x) for x in arr]
    for k in range(1, n):
        acc = 0
        for i in range(1, k):
            acc = F.add(acc, F.mul(s[i], s[k - i]))
        uk = u[k] if k < len(u) else 0
        s.append(F.mul(F.sub(uk, acc), inv2s0))
    return s


def integral_fractional(f):
    """Split f = [f] + {f} with [f] a Polynomial and {f} in X^-1 O."""
    if f.prec < 1:
        raise PrecisionExhausted(f'integral part needs the X^0 digit; horizon is {f.prec}')
    F = f.field
    if not f.coeffs or f.start > 0:
        return Polynomial.zero(F), f
    cut = min(len(f.coeffs), 1 - f.start)
    head = f.coeffs[:cut]
    cs = [0] * (-f.start + 1)
    for k, c in enumerate(head):
        cs[-(f.start + k)] = c
    poly = Polynomial(F, cs)
    frac = LaurentSeries(F, f.start + cut, f.coeffs[cut:], f.prec)
    return poly, frac


def series_from_rational(r, prec):
    """Expansion of a RationalFunction (or Polynomial) to O(X^-prec)."""
    if isinstance(r, Polynomial):
        r = RationalFunction(r)
    F = r.field
    if r.is_zero():
        return LaurentSeries.zero(F)
    if r.is_polynomial():
        return LaurentSeries.from_polynomial(r.num)
    v = r.den.deg - r.num.deg
    if prec == INF:
        if len([c for c in r.den.coeffs if c]) == 1:
            # monomial denominator: the expansion is finite
            return LaurentSeries.from_polynomial(r.num).shift(-r.den.deg).scale(
                F.inv(r.den.lc))
        raise ValueError('an infinite expansion needs a finite precision')
    n = prec - v
    if n <= 0:
        return LaurentSeries.zero(F, prec)
    num = tuple(reversed(r.num.coeffs))
    inv = _series_inverse(F, tuple(reversed(r.den.coeffs)), n)
    return LaurentSeries(F, v, conv(F, num[:n], inv)[:n], prec)


class SeriesSource:
    """Something that can regenerate an element of K^ to any requested precision."""

    max_prec = INF

    def series(self, prec):
        raise NotImplementedError

    def is_rational(self):
        return False


class RationalSource(SeriesSource):
    def __init__(self, r):
        if isinstance(r, Polynomial):
            r = RationalFunction(r)
        self.rational = r

    def series(self, prec):
        return series_from_rational(self.rational, prec)

    def is_rational(self):
        return True

    def __repr__(self):
        return f'RationalSource({self.rational})'


class StreamSource(SeriesSource):
    """Coefficient stream: ``fn(i)`` is the coefficient of X^-i for i >= start."""

    def __init__(self, field, fn, start=1, length=None):
        self.field = field
        self.fn = fn
        self.start = start
        self.max_prec = INF if length is None else start + length

    def series(self, prec):
        if prec > self.max_prec:
            raise PrecisionExhausted(f'stream only provides digits below X^-{self.max_prec}')
        return LaurentSeries(self.field, self.start,
                             [self.fn(i) for i in range(self.start, prec)], prec)


class FunctionSource(SeriesSource):
    """Wraps any callable prec -> LaurentSeries."""

    def __init__(self, fn):
        self.fn = fn

    def series(self, prec):
        return self.fn(prec)


def refine(compute, start=DEFAULT_PREC, cap=PREC_CAP):
    """Call ``compute(prec)`` with doubling precision until it stops raising
    PrecisionExhausted; give up (re-raise) once ``cap`` has failed."""
    prec = start
    while True:
        try:
            return compute(prec)
        except PrecisionExhausted:
            if prec >= cap:
                raise
            prec = min(2 * prec, cap)
