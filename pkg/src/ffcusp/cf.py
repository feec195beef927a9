"""Artin continued fractions over F_q((X^-1)): expansion, convergents,
reconstruction, and quadratic irrationals as known-answer sources."""

import enum
from dataclasses import dataclass

from .algebra import Polynomial, RationalFunction, xgcd
from .errors import CharacteristicTwoError, NoRootError, PrecisionExhausted
from .laurent import (
    DEFAULT_PREC,
    PREC_CAP,
    LaurentSeries,
    RationalSource,
    SeriesSource,
    integral_fractional,
    series_from_rational,
)


@dataclass(frozen=True)
class CFSpec:
    """a0; preperiod...; | period...  (eventually periodic or finite).

    Every quotient after a0 must have positive degree.
    """

    a0: Polynomial
    preperiod: tuple = ()
    period: tuple = None

    def __post_init__(self):
        object.__setattr__(self, 'preperiod', tuple(self.preperiod))
        if self.period is not None:
            object.__setattr__(self, 'period', tuple(self.period))
            if not self.period:
                raise ValueError('period must be nonempty')
        for i, a in enumerate(self.preperiod + (self.period or ()), start=1):
            if a.deg < 1:
                raise ValueError(f'partial quotient a_{i} has degree {a.deg}; need >= 1')
        if self.period is not None:
            # canonical form: primitive period, shortest preperiod
            per, pre = self.period, self.preperiod
            k = len(per)
            for d in range(1, k + 1):
                if k % d == 0 and per == per[:d] * (k // d):
                    per = per[:d]
                    break
            while pre and pre[-1] == per[-1]:
                per = (pre[-1],) + per[:-1]
                pre = pre[:-1]
            object.__setattr__(self, 'period', per)
            object.__setattr__(self, 'preperiod', pre)

    @property
    def field(self):
        return self.a0.field

    def is_finite(self):
        return self.period is None

    def __len__(self):
        if self.period is not None:
            raise TypeError('infinite continued fraction has no length')
        return 1 + len(self.preperiod)

    def quotient(self, i):
        if i == 0:
            return self.a0
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        if self.period is None:
            raise IndexError(f'finite continued fraction has no a_{i}')
        k = (i - 1 - len(self.preperiod)) % len(self.period)
        return self.period[k]

    def quotients(self, n):
        """a_0..a_n (fewer when the expansion is finite)."""
        if self.period is None:
            n = min(n, len(self.preperiod))
        return [self.quotient(i) for i in range(n + 1)]

    def __str__(self):
        text = f'{self.a0};'
        if self.preperiod:
            text += ' ' + ', '.join(str(a) for a in self.preperiod)
        if self.period is not None:
            text += ' | ' + ', '.join(str(a) for a in self.period)
        return text

    def value(self):
        """The rational value of a finite spec."""
        if self.period is not None:
            raise ValueError('periodic continued fractions are irrational')
        c = convergents(self.quotients(len(self.preperiod)))[-1]
        return RationalFunction(c.P, c.Q)


class QuotientRule:
    """An infinite continued fraction a0; a1, a2, ... given by a rule i -> a_i
    (i >= 1), for families that are not eventually periodic."""

    def __init__(self, a0, rule, name=None):
        self.a0 = a0
        self.rule = rule
        self.name = name

    @property
    def field(self):
        return self.a0.field

    def is_finite(self):
        return False

    def quotient(self, i):
        if i == 0:
            return self.a0
        a = self.rule(i)
        if a.deg < 1:
            raise ValueError(f'partial quotient a_{i} has degree {a.deg}; need >= 1')
        return a

    def quotients(self, n):
        return [self.quotient(i) for i in range(n + 1)]

    def truncated(self, n):
        """The finite spec a0; a1, ..., a_n."""
        return CFSpec(self.a0, tuple(self.quotient(i) for i in range(1, n + 1)))

    def __repr__(self):
        return f'QuotientRule({self.name or self.rule!r})'


class CFStatus(enum.Enum):
    COMPLETE = 'complete'
    TERMINATED = 'terminated'


@dataclass
class CFExpansion:
    quotients: list
    status: CFStatus

    def __iter__(self):
        return iter((self.quotients, self.status))


@dataclass(frozen=True)
class ConvergentPair:
    n: int
    P: Polynomial
    Q: Polynomial
    prevP: Polynomial
    prevQ: Polynomial

    def determinant(self):
        """P_n Q_{n-1} - P_{n-1} Q_n, which is (-1)^(n+1)."""
        return self.P * self.prevQ - self.prevP * self.Q


def artin_step(f):
    """One step of Artin's map: f -> ([1/f], {1/f}) for f in X^-1 O - {0}.

    Needs the horizon of ``f`` to reach ``2 v(f) + 1`` so that the integral
    part of 1/f is certified.
    """
    if f.is_known_zero():
        raise ZeroDivisionError("Artin's map is undefined at 0")
    v = f.valuation
    if v < 1:
        raise ValueError(f'artin_step needs f in X^-1 O; valuation is {v}')
    return integral_fractional(f.invert())


def _euclid_quotients(r, n_max):
    num, den = r.num, r.den
    out = []
    while len(out) <= n_max:
        a, rem = divmod(num, den)
        out.append(a)
        if not rem:
            return CFExpansion(out, CFStatus.TERMINATED)
        num, den = den, rem
    return CFExpansion(out, CFStatus.COMPLETE)


def cf_expand(src, n_max, start_prec=DEFAULT_PREC, cap=PREC_CAP):
    """Partial quotients a_0..a_{n_max} of the element produced by ``src``.

    Rational inputs are expanded exactly by Euclid.  Series inputs are
    regenerated at doubled precision whenever the horizon runs out; at the
    cap PrecisionExhausted is raised with the certified prefix attached.
    """
    if n_max < 0:
        raise ValueError('n_max must be >= 0')
    if isinstance(src, (RationalFunction, Polynomial)):
        src = RationalSource(src)
    if isinstance(src, RationalSource):
        return _euclid_quotients(src.rational, n_max)
    if isinstance(src, LaurentSeries):
        return _expand_series(src, n_max)

    prec = min(start_prec, src.max_prec)
    best = []
    while True:
        try:
            return _expand_series(src.series(prec), n_max)
        except PrecisionExhausted as exc:
            if exc.prefix is not None and len(exc.prefix) > len(best):
                best = exc.prefix
            if prec >= cap or prec >= src.max_prec:
                raise PrecisionExhausted(
                    f'precision cap {prec} reached after {len(best)} partial quotients',
                    prefix=best) from exc
            prec = min(2 * prec, cap, src.max_prec)


def _expand_series(f, n_max):
    out = []
    try:
        a0, frac = integral_fractional(f)
        out.append(a0)
        while len(out) <= n_max:
            if frac.is_known_zero():
                return CFExpansion(out, CFStatus.TERMINATED)
            a, frac = artin_step(frac)
            out.append(a)
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(str(exc), prefix=list(out)) from exc
    return CFExpansion(out, CFStatus.COMPLETE)


def convergents(cf, n=None):
    """ConvergentPairs for indices 0..n of the quotient sequence ``cf``
    (a list of Polynomials or a CFSpec)."""
    if isinstance(cf, QuotientRule):
        if n is None:
            raise ValueError('an infinite rule needs an explicit n')
        cf = cf.quotients(n)
    elif isinstance(cf, CFSpec):
        if n is None:
            n = len(cf) - 1
        cf = cf.quotients(n)
    if n is None:
        n = len(cf) - 1
    if n >= len(cf):
        raise ValueError(f'need {n + 1} partial quotients, have {len(cf)}')
    F = cf[0].field
    one, zero = Polynomial.one(F), Polynomial.zero(F)
    P_prev, Q_prev = one, zero
    P, Q = cf[0], one
    out = [ConvergentPair(0, P, Q, P_prev, Q_prev)]
    for k in range(1, n + 1):
        a = cf[k]
        P, P_prev = a * P + P_prev, P
        Q, Q_prev = a * Q + Q_prev, Q
        out.append(ConvergentPair(k, P, Q, P_prev, Q_prev))
    return out


def cf_reconstruct(spec, prec):
    """Series of the element with continued fraction ``spec`` to O(X^-prec).

    For periodic specs the convergent P_n/Q_n with deg Q_n + deg Q_{n+1} >= prec
    is expanded; its distance to the limit is exactly q^-(deg Q_n + deg Q_{n+1}).
    """
    if spec.is_finite():
        return series_from_rational(spec.value(), prec)
    F = spec.field
    one, zero = Polynomial.one(F), Polynomial.zero(F)
    P_prev, Q_prev = one, zero
    P, Q = spec.a0, one
    k = 0
    while True:
        a = spec.quotient(k + 1)
        P_next, Q_next = a * P + P_prev, a * Q + Q_prev
        if Q.deg + Q_next.deg >= prec:
            return series_from_rational(RationalFunction(P, Q), prec)
        P_prev, Q_prev, P, Q = P, Q, P_next, Q_next
        k += 1


class CFSource(SeriesSource):
    def __init__(self, spec):
        self.spec = spec

    def series(self, prec):
        return cf_reconstruct(self.spec, prec)

    def is_rational(self):
        return self.spec.is_finite()

    def __repr__(self):
        return f'CFSource({self.spec})'


def _poly_sqrt(P):
    """Exact square root in F_q[X] or None."""
    if not P:
        return P
    if P.deg % 2:
        return None
    F = P.field
    if F.sqrt(P.lc) is None:
        return None
    half = P.deg // 2
    s = LaurentSeries.from_polynomial(P).truncate(1 - half).sqrt()
    S = integral_fractional(s)[0]
    return S if S * S == P else None


class QuadraticSource(SeriesSource):
    """Root of f^2 + b f + c = 0 given by (-b + sign * sqrt(D)) / 2."""

    def __init__(self, b, c, sign):
        self.b, self.c, self.sign = b, c, sign
        self.disc = b * b - c * 4
        self._vdisc = self.disc.den.deg - self.disc.num.deg

    def series(self, prec):
        F = self.b.field
        H = prec + self._vdisc // 2
        s = series_from_rational(self.disc, H).sqrt(prec)
        if self.sign < 0:
            s = -s
        b = series_from_rational(self.b, prec)
        root = (s - b).scale(F.inv(F.reduce(2)))
        return root.truncate(prec)

    def __repr__(self):
        return f'QuadraticSource({self.b}, {self.c}, {self.sign:+d})'


def quadratic_from_equation(b, c, prec=DEFAULT_PREC):
    """Source for the root in X^-1 O of f^2 + b f + c = 0 (odd characteristic).

    A square discriminant gives a RationalSource.  ``prec`` is the working
    precision used to decide which root lies in X^-1 O.
    """
    if isinstance(b, Polynomial):
        b = RationalFunction(b)
    if isinstance(c, Polynomial):
        c = RationalFunction(c)
    F = b.field
    if F.p == 2:
        raise CharacteristicTwoError('quadratic roots need odd characteristic')
    D = b * b - c * 4
    half = RationalFunction(Polynomial.constant(F, F.inv(F.reduce(2))))
    S = _poly_sqrt(D.num * D.den)
    if S is not None:
        sqrtD = RationalFunction(S, D.den)
        for sign in (1, -1):
            root = (sqrtD * sign - b) * half
            if root.deg < 0:
                return RationalSource(root)
        raise NoRootError('neither root lies in X^-1 O')
    vD = D.den.deg - D.num.deg
    if vD % 2 or F.sqrt(F.mul(D.num.lc, F.inv(D.den.lc))) is None:
        raise NoRootError('discriminant has no square root in F_q((X^-1))')
    for sign in (1, -1):
        src = QuadraticSource(b, c, sign)
        f = src.series(prec)
        if f.coeffs and f.start >= 1:
            return src
    raise NoRootError('neither root lies in X^-1 O')


def golden_spec(field):
    """[0; X, X, X, ...], the root of f^2 + X f - 1 = 0."""
    X = Polynomial.x(field)
    return CFSpec(Polynomial.zero(field), (), (X,))


def pow2_rule(field):
    """[0; X^2, X^4, X^8, ...], i.e. a_n = X^(2^n): approximation exponent 3."""
    return QuotientRule(Polynomial.zero(field),
                        lambda i: Polynomial.monomial(field, 2 ** i), 'a_n = X^(2^n)')


def solve_unit_row(a, b):
    """(c, d) with a d - b c = 1 for coprime a, b."""
    g, s, t = xgcd(a, b)
    if g.deg != 0:
        raise ValueError('entries are not coprime')
    # s a + t b = 1  ->  d = s, c = -t
    return -t, s
