"""Finite-horizon estimators for the horospherical logarithm law.

Three quantities should agree in the limit for irrational f:

* orbit side: limsup over |g| -> inf of Delta_{Q*}(u_g O^2) / log_q |g|;
* exponent side: 2 - 2/nu_{Q*}(f);
* continued-fraction side: 1 + limsup over n with Q* | Q_n of
  deg a_{n+1} / (deg a_{n+1} + 2 sum_{i<=n} deg a_i).

Everything is kept as exact Fractions, with math.inf as the extended value
and None as the sentinel for an empty filter.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial, congruent_mod
from .bttree import BoundaryPoint, Mat2, TreeVertex, geodesic_step
from .cf import CFSpec, QuotientRule, cf_expand, convergents
from .errors import PrecisionExhausted
from .laurent import DEFAULT_PREC, PREC_CAP, LaurentSeries, refine
from .reduction import delta_congruence, delta_invariant, gauss_reduce, unipotent_lattice

SUP, INF_DIR = 'sup', 'inf'


# -- psi ---------------------------------------------------------------------

@dataclass(frozen=True)
class PsiSpec:
    """psi(t) = a t^alpha (IDENTITY is a = alpha = 1)."""

    kind: str = 'identity'
    a: Fraction = Fraction(1)
    alpha: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'alpha', Fraction(self.alpha))
        if self.kind not in ('identity', 'power'):
            raise ValueError(f'unknown psi kind {self.kind!r}')
        if self.a <= 0 or not 0 < self.alpha <= 1:
            raise ValueError('need a > 0 and 0 < alpha <= 1')
        if self.kind == 'identity' and (self.a != 1 or self.alpha != 1):
            raise ValueError('identity has a = alpha = 1')

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def power(cls, a, alpha=1):
        return cls('power', a, alpha)

    @classmethod
    def parse(cls, text):
        """'id' or 'pow:a:alpha' (a and alpha as integers or fractions)."""
        text = text.strip()
        if text in ('id', 'identity'):
            return cls.identity()
        parts = text.split(':')
        if parts[0] == 'pow' and len(parts) in (2, 3):
            a = Fraction(parts[1])
            alpha = Fraction(parts[2]) if len(parts) == 3 else Fraction(1)
            return cls.power(a, alpha)
        raise ValueError(f'cannot parse psi {text!r}; use id or pow:a:alpha')

    @property
    def exact(self):
        return self.alpha == 1

    @property
    def a_psi(self):
        """lim t / psi(t): 1/a when alpha = 1, +inf otherwise."""
        if self.alpha < 1:
            return math.inf
        return 1 / self.a

    def __call__(self, t):
        if self.alpha == 1:
            return self.a * t
        return float(self.a) * t ** float(self.alpha)

    def ratio(self, x, t):
        """x / psi(t) as a Fraction (rounded for alpha < 1)."""
        if self.alpha == 1:
            return Fraction(x) / (self.a * t)
        return Fraction(x / self(t)).limit_denominator(10 ** 9)

    def __str__(self):
        if self.kind == 'identity':
            return 'id'
        return f'pow:{self.a}:{self.alpha}'


# -- extended rationals ------------------------------------------------------

def ext_to_json(x):
    if x is None:
        return None
    if x == math.inf:
        return 'inf'
    x = Fraction(x)
    return {'num': x.numerator, 'den': x.denominator}


def ext_from_json(obj):
    if obj is None:
        return None
    if obj == 'inf':
        return math.inf
    return Fraction(obj['num'], obj['den'])


def ext_add(x, y):
    """Addition on [0, +inf] with +inf + t = +inf."""
    if x is None or y is None:
        return None
    if x == math.inf or y == math.inf:
        return math.inf
    return x + y


class RateEstimate:
    """Running limsup (SUP) or liminf (INF) estimator.

    ``running`` is the exact extremum of the whole history; ``tail`` is the
    extremum over the later half, which tracks the lim- rather than the sup
    of an eventually monotone sequence.
    """

    def __init__(self, direction=SUP, history=None):
        if direction not in (SUP, INF_DIR):
            raise ValueError('direction must be sup or inf')
        self.direction = direction
        self.history = []
        for i, v in history or ():
            self.add(i, v)

    def add(self, index, value):
        if value != math.inf:
            value = Fraction(value)
        self.history.append((index, value))

    def _pick(self, values):
        values = list(values)
        if not values:
            return None
        return max(values) if self.direction == SUP else min(values)

    @property
    def horizon(self):
        return self.history[-1][0] if self.history else 0

    @property
    def running(self):
        return self._pick(v for _, v in self.history)

    @property
    def tail(self):
        return self._pick(v for _, v in self.history[len(self.history) // 2:])

    def values(self):
        return [v for _, v in self.history]

    def to_json(self):
        return {
            'direction': self.direction,
            'horizon': self.horizon,
            'running': ext_to_json(self.running),
            'tail': ext_to_json(self.tail),
            'history': [[i, ext_to_json(v)] for i, v in self.history],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj['direction'], [(i, ext_from_json(v)) for i, v in obj['history']])

    def __eq__(self, other):
        return (isinstance(other, RateEstimate) and self.direction == other.direction
                and self.history == other.history)

    def __repr__(self):
        return f'RateEstimate({self.direction}, n={len(self.history)}, running={self.running})'


# -- continued-fraction side -------------------------------------------------

def _quotient_list(cf, n):
    """a_0..a_n from a list, CFSpec or QuotientRule."""
    if isinstance(cf, (CFSpec, QuotientRule)):
        qs = cf.quotients(n)
    else:
        qs = list(cf[:n + 1])
    if len(qs) < n + 1:
        raise ValueError(f'need {n + 1} partial quotients, have {len(qs)}')
    return qs


def _filtered_indices(qs, Qstar, N):
    """n in 1..N with Q* | Q_n, computing Q_n mod Q* by the recurrence."""
    if not Qstar:
        raise ZeroDivisionError('Q* must be nonzero')
    F = qs[0].field
    prev, cur = Polynomial.zero(F), Polynomial.one(F)
    out = []
    for n in range(1, N + 1):
        prev, cur = cur, (qs[n] * cur + prev) % Qstar
        if not cur:
            out.append(n)
    return out


def cf_side_rate(cf, Qstar, N):
    """Running sup of deg a_{n+1} / (deg a_{n+1} + 2 sum_{i=1}^n deg a_i) over
    1 <= n <= N with Q* | Q_n."""
    est = RateEstimate(SUP)
    if N < 1:
        return est
    qs = _quotient_list(cf, N + 1)
    degs = [a.deg for a in qs]
    prefix = [0] * (N + 2)
    for i in range(1, N + 2):
        prefix[i] = prefix[i - 1] + degs[i]
    for n in _filtered_indices(qs, Qstar, N):
        est.add(n, Fraction(degs[n + 1], degs[n + 1] + 2 * prefix[n]))
    return est


def exponent_estimate(cf, Qstar, N):
    """Running inf of 2 deg Q_n / (deg Q_n + deg Q_{n+1}) over 1 <= n <= N with
    Q* | Q_n.  ``nu_estimate`` turns the tail value into 2 / value."""
    est = RateEstimate(INF_DIR)
    if N < 1:
        return est
    qs = _quotient_list(cf, N + 1)
    degQ = [0] * (N + 2)
    for i in range(1, N + 2):
        degQ[i] = degQ[i - 1] + qs[i].deg
    for n in _filtered_indices(qs, Qstar, N):
        est.add(n, Fraction(2 * degQ[n], degQ[n] + degQ[n + 1]))
    return est


def nu_from(value):
    """2 / value on [0, +inf]; None stays None."""
    if value is None:
        return None
    if value == 0:
        return math.inf
    return 2 / Fraction(value)


def nu_estimate(est, use_tail=True):
    return nu_from(est.tail if use_tail else est.running)


# -- orbit side --------------------------------------------------------------

@dataclass
class SweepRecord:
    g: LaurentSeries
    deg_g: int
    delta: int
    ratio: Fraction
    tail_seed: int = None
    convergent: int = None
    delta_full: int = None

    def to_json(self):
        return {
            'g': str(self.g),
            'deg_g': self.deg_g,
            'tail_seed': self.tail_seed,
            'convergent': self.convergent,
            'delta': self.delta,
            'delta_full': self.delta_full,
            'ratio': ext_to_json(self.ratio),
        }


def random_laurent_g(field, d, tail_depth, rng):
    """g = c X^d + (random terms X^(d-1) .. X^(-tail_depth)), c != 0."""
    lead = rng.randrange(1, field.q)
    terms = {-d: lead}
    for e in range(d - 1, -tail_depth - 1, -1):
        c = rng.randrange(field.q)
        if c:
            terms[-e] = c
    return LaurentSeries.from_terms(field, terms)


def extremal_g(f, P, Q):
    """g with u_g . 0 = P/Q, namely P f / (Q f - P)."""
    den = f * LaurentSeries.from_polynomial(Q) - LaurentSeries.from_polynomial(P)
    return f * LaurentSeries.from_polynomial(P) * den.invert()


def orbit_delta(f_src, g_of, Qstar, prec=DEFAULT_PREC, cap=PREC_CAP):
    """(Delta_{Q*}, Delta, deg g) for u_g O^2, refining the precision of f
    until the reduction is certified.  ``g_of`` maps a series for f to g."""
    def compute(p):
        fs = f_src.series(p)
        g = g_of(fs)
        if not g.coeffs:
            raise PrecisionExhausted('g not certified')
        M = unipotent_lattice(fs, g, prec=p)
        res = gauss_reduce(M)
        if res.delta == 0:
            dq = 0
        elif congruent_mod(res.gamma0[1][0], Qstar):
            dq = res.delta
        else:
            dq = 0
        return dq, res.delta, g.degree, g

    return refine(compute, start=prec, cap=cap)


def orbit_sweep(f, Qstar, deg_range, samples_per_degree, tail_depth=4,
                include_extremal=True, seed=0, prec=DEFAULT_PREC, cap=PREC_CAP):
    """Sample Delta_{Q*}(u_g O^2) / deg g.  Returns (records, RateEstimate)."""
    d_min, d_max = deg_range
    if d_min < 1 or d_max < d_min:
        raise ValueError(f'empty or invalid degree range {deg_range}')
    F = f.series(1).field
    if not Qstar:
        raise ZeroDivisionError('Q* must be nonzero')
    rng = random.Random(seed)
    records = []
    for d in range(d_min, d_max + 1):
        for _ in range(samples_per_degree):
            s = rng.getrandbits(32)
            g = random_laurent_g(F, d, tail_depth, random.Random(s))
            dq, dfull, deg, _ = orbit_delta(f, lambda fs, g=g: g, Qstar, prec, cap)
            records.append(SweepRecord(g, deg, dq, Fraction(dq, deg), tail_seed=s,
                                       delta_full=dfull))
    if include_extremal:
        for n, P, Q in _extremal_convergents(f, d_max, prec, cap):
            dq, dfull, deg, g = orbit_delta(
                f, lambda fs, P=P, Q=Q: extremal_g(fs, P, Q), Qstar, prec, cap)
            if deg < 1:
                continue
            records.append(SweepRecord(g, deg, dq, Fraction(dq, deg), convergent=n,
                                       delta_full=dfull))
    # history ordered by deg g, so the tail is the large-|g| half
    records.sort(key=lambda r: r.deg_g)
    est = RateEstimate(SUP)
    for r in records:
        est.add(r.deg_g, r.ratio)
    return records, est


def _extremal_convergents(f, d_max, prec, cap):
    """(n, P_n, Q_n) with P_n != 0 and deg Q_n + deg Q_{n+1} <= d_max."""
    n_max = d_max + 1
    qs = cf_expand(f, n_max, prec, cap).quotients
    out = []
    cs = convergents(qs)
    for c in cs[:-1]:
        if c.n + 1 >= len(cs):
            break
        if c.Q.deg + cs[c.n + 1].Q.deg > d_max:
            break
        if c.P:
            out.append((c.n, c.P, c.Q))
    return out


# -- geodesic side -----------------------------------------------------------

def excursion_profile(f, T, Qstar=None, prec=DEFAULT_PREC):
    """[(t, Delta(x_t))] for t = 0..T-1 along the geodesic from the exit
    vertex x_0 of HB_inf toward f (Delta_{Q*} when Q* is given)."""
    if T < 1:
        return []
    bp = BoundaryPoint(f.series(1).field, f)
    F = bp.field
    v = TreeVertex.make(F, 0, f.series(max(prec, 1)))
    out = []
    for t in range(T):
        d = delta_invariant(v) if Qstar is None else delta_congruence(v, Qstar)
        out.append((t, d))
        if t + 1 < T:
            v = geodesic_step(v, bp, prec)
    return out


def profile_peaks(profile):
    """(t, height) at strict local maxima."""
    out = []
    for k in range(1, len(profile) - 1):
        t, d = profile[k]
        if d > profile[k - 1][1] and d > profile[k + 1][1]:
            out.append((t, d))
    return out


def predicted_peaks(cf, n_max):
    """(deg Q_n + deg Q_{n+1}, deg a_{n+1}) for n = 0..n_max."""
    qs = _quotient_list(cf, n_max + 1)
    degQ = [0]
    for a in qs[1:]:
        degQ.append(degQ[-1] + a.deg)
    return [(degQ[n] + degQ[n + 1], qs[n + 1].deg) for n in range(n_max + 1)]


# -- three-way check ---------------------------------------------------------

def corollary44_check(f, Qstar, psi=None, horizons=None):
    """Compare the orbit side (with psi) against a_psi + the excursion side,
    and report the continued-fraction side and nu estimate alongside."""
    psi = psi or PsiSpec.identity()
    h = {'deg_min': 1, 'deg_max': 17, 'samples': 2, 'tail_depth': 4, 'N': 50,
         'T': 41, 'seed': 0, 'extremal': True}
    h.update(horizons or {})
    records, _ = orbit_sweep(f, Qstar, (h['deg_min'], h['deg_max']), h['samples'],
                             h['tail_depth'], h['extremal'], h['seed'])
    lhs = RateEstimate(SUP)
    for r in records:
        lhs.add(r.deg_g, psi.ratio(r.delta, r.deg_g))
    profile = excursion_profile(f, h['T'], Qstar)
    rhs = RateEstimate(SUP)
    for t, d in profile[1:]:
        rhs.add(t, psi.ratio(d, t))
    qs = cf_expand(f, h['N'] + 1).quotients
    cf_side = cf_side_rate(qs, Qstar, h['N'])
    expo = exponent_estimate(qs, Qstar, h['N'])
    predicted = ext_add(psi.a_psi, rhs.tail)
    gap = None
    if lhs.tail is not None and predicted is not None:
        gap = math.inf if math.inf in (lhs.tail, predicted) else abs(lhs.tail - predicted)
    deficits = [qs[r.convergent + 1].deg - r.delta_full for r in records
                if r.convergent is not None and r.convergent + 1 < len(qs)]
    return {
        'psi': str(psi),
        'a_psi': psi.a_psi,
        'lhs': lhs,
        'rhs': rhs,
        'predicted': predicted,
        'gap': gap,
        'records': records,
        'profile': profile,
        'cf_side': cf_side,
        'exponent': expo,
        'nu_estimate': nu_estimate(expo),
        'constants_observed': {'peak_deficit': max(deficits) if deficits else None},
        'horizons': h,
    }


def theta_sup_estimate(f, s, sample_budget=64, seed=0, tail_depth=4, deg_max=None,
                       prec=DEFAULT_PREC):
    """Sampled Theta(s) = sup |Delta(w_0) - Delta(v_0)| over boundary
    directions eta = u_g . 0 with branch time deg g <= log_q s, where
    v_0 = gamma_f [O^2] and w_0 = u_g gamma_f [O^2]."""
    F = f.series(1).field
    q = F.q
    if s != math.inf and s < 1:
        raise ValueError('need s >= 1')
    k = _floor_log(s, q)
    if deg_max is None:
        deg_max = 12 if k == math.inf else k
    base = _theta_delta(f, lambda fs: LaurentSeries.zero(F), prec)
    samples = theta_samples(f, deg_max, sample_budget, seed, tail_depth, prec)
    best = 0
    for deg, val in samples:
        if deg <= k:
            best = max(best, abs(val - base))
    return best


def theta_profile(f, deg_max, sample_budget=64, seed=0, tail_depth=4, prec=DEFAULT_PREC):
    """[(k, Theta(q^k))] for k = 0..deg_max over one fixed sample set, so the
    profile is nondecreasing by construction."""
    F = f.series(1).field
    base = _theta_delta(f, lambda fs: LaurentSeries.zero(F), prec)
    samples = theta_samples(f, deg_max, sample_budget, seed, tail_depth, prec)
    out = []
    best = 0
    for k in range(deg_max + 1):
        for d, val in samples:
            if d == k:
                best = max(best, abs(val - base))
        out.append((k, best))
    return out


def theta_samples(f, deg_max, sample_budget, seed=0, tail_depth=4, prec=DEFAULT_PREC):
    """(deg g, Delta(u_g gamma_f O^2)) for random g and extremal g."""
    F = f.series(1).field
    rng = random.Random(seed)
    out = []
    if deg_max >= 1:
        per = max(1, sample_budget // deg_max)
        for d in range(1, deg_max + 1):
            for _ in range(per):
                g = random_laurent_g(F, d, tail_depth, rng)
                out.append((d, _theta_delta(f, lambda fs, g=g: g, prec)))
        for n, P, Q in _extremal_convergents(f, deg_max, prec, PREC_CAP):
            def g_of(fs, P=P, Q=Q):
                return extremal_g(fs, P, Q)
            deg = refine(lambda p: g_of(f.series(p)).degree, start=prec)
            if 1 <= deg <= deg_max:
                out.append((deg, _theta_delta(f, g_of, prec)))
    return out


def _theta_delta(f, g_of, prec):
    def compute(p):
        fs = f.series(p)
        g = g_of(fs)
        finv = fs.invert(p)
        M = Mat2(fs.field, 1, g, finv, g * finv + 1)
        return delta_invariant(M)
    return refine(compute, start=prec)


def _floor_log(s, q):
    if s == math.inf:
        return math.inf
    k = 0
    while q ** (k + 1) <= s:
        k += 1
    return k
