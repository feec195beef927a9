import pytest
from hypothesis import given, settings, strategies as st

from ffcusp.algebra import GF, Polynomial, RationalFunction
from ffcusp.errors import PrecisionExhausted
from ffcusp.laurent import (
    INF,
    LaurentSeries,
    RationalSource,
    StreamSource,
    integral_fractional,
    refine,
    series_from_rational,
)
from strategies import fields, polys


def L(F, start, cs, prec=INF):
    return LaurentSeries(F, start, cs, prec)


class TestSeriesFromRational:
    def test_one_over_x(self):
        F = GF(3)
        s = series_from_rational(RationalFunction(Polynomial.one(F), Polynomial.x(F)), 4)
        assert (s.start, s.coeffs, s.prec) == (1, (1,), 4)

    def test_x_over_x_minus_one(self):
        # oracle: multiply back by X - 1 and compare with X to the horizon
        F = GF(3)
        X = Polynomial.x(F)
        r = RationalFunction(X, X - 1)
        s = series_from_rational(r, 3)
        assert (s.start, s.coeffs, s.prec) == (0, (1, 1, 1), 3)
        back = s * LaurentSeries.from_polynomial(X - 1)
        assert back.agrees_with(LaurentSeries.from_polynomial(X))

    def test_zero_is_known_zero(self):
        F = GF(3)
        s = series_from_rational(RationalFunction(Polynomial.zero(F)), 10)
        assert s.is_known_zero()

    def test_valuation(self):
        F = GF(5)
        X = Polynomial.x(F)
        s = series_from_rational(RationalFunction(X + 1, X ** 3 + 2), 20)
        assert s.valuation == 2


class TestArithmetic:
    def test_cancellation_is_zero_to_precision(self):
        F = GF(3)
        s = L(F, 1, (1,), 5) + L(F, 1, (2,), 5)
        assert s.is_zero_to_precision() and not s.is_known_zero()
        assert s.prec == 5
        with pytest.raises(PrecisionExhausted):
            s.valuation

    def test_invert_f2_example(self):
        # 1/(X^-1 + X^-2) = X (1 + X^-1)^-1 = X + 1 + X^-1 + X^-2 + ... over F_2;
        # horizon 6 - 2*1 = 4
        F = GF(2)
        f = L(F, 1, (1, 1), 6)
        g = f.invert()
        assert g.prec == 4
        assert (g.start, g.coeffs) == (-1, (1, 1, 1, 1, 1))
        assert (f * g).agrees_with(LaurentSeries.one(F))

    def test_mul_by_one(self):
        F = GF(3)
        f = L(F, -2, (1, 2, 0, 1), 7)
        g = f * LaurentSeries.one(F)
        assert g == f

    def test_invert_known_zero(self):
        with pytest.raises(ZeroDivisionError):
            LaurentSeries.zero(GF(3)).invert()

    def test_invert_unknown_lead(self):
        with pytest.raises(PrecisionExhausted):
            LaurentSeries.zero(GF(3), 5).invert()

    def test_mul_horizon(self):
        F = GF(3)
        a = L(F, 1, (1,), 10)
        b = L(F, -2, (1, 1), 5)
        assert (a * b).prec == min(1 + 5, -2 + 10)


class TestIntegralFractional:
    def test_split(self):
        F = GF(3)
        f = L(F, -2, (1, 0, 1, 1), 9)
        a, frac = integral_fractional(f)
        assert a == Polynomial(F, (1, 0, 1))
        assert (frac.start, frac.coeffs, frac.prec) == (1, (1,), 9)

    def test_in_x_inverse_O(self):
        F = GF(3)
        f = L(F, 2, (1, 2), 9)
        a, frac = integral_fractional(f)
        assert not a and frac == f

    def test_boundary_horizon(self):
        F = GF(3)
        f = L(F, -3, (1,), 1)
        a, frac = integral_fractional(f)
        assert a == Polynomial.monomial(F, 3)
        assert frac.is_zero_to_precision() and frac.prec == 1

    def test_not_determined(self):
        F = GF(3)
        with pytest.raises(PrecisionExhausted):
            integral_fractional(L(F, -3, (1,), 0))


class TestSources:
    def test_stream_source(self):
        F = GF(2)
        src = StreamSource(F, lambda i: 1 if i & (i - 1) == 0 else 0, start=1, length=40)
        s = src.series(20)
        assert s.start == 1 and s.prec == 20
        assert [s.coefficient(i) for i in range(1, 9)] == [1, 1, 0, 1, 0, 0, 0, 1]
        with pytest.raises(PrecisionExhausted):
            refine(lambda p: src.series(p).coefficient(50) or src.series(p).coefficient(50), start=8, cap=32)

    def test_refine_doubles(self):
        seen = []

        def compute(p):
            seen.append(p)
            if p < 100:
                raise PrecisionExhausted('more')
            return p

        assert refine(compute, start=16, cap=1024) == 128
        assert seen == [16, 32, 64, 128]


@st.composite
def series_pairs(draw):
    F = draw(fields)
    a = draw(polys(F, 5, nonzero=True))
    b = draw(polys(F, 5, nonzero=True))
    c = draw(polys(F, 5, nonzero=True))
    d = draw(polys(F, 5, nonzero=True))
    p = draw(st.integers(5, 40))
    return F, RationalFunction(a, b), RationalFunction(c, d), p


@settings(max_examples=200, deadline=None)
@given(series_pairs())
def test_valuation_rules(t):
    F, r, s, p = t
    x = series_from_rational(r, p)
    y = series_from_rational(s, p)
    if x.coeffs and y.coeffs:
        assert (x * y).valuation == x.valuation + y.valuation
    z = x + y
    if x.coeffs and y.coeffs and x.valuation != y.valuation:
        assert z.valuation == min(x.valuation, y.valuation)
    elif z.coeffs:
        assert z.valuation >= min(x.val_bound, y.val_bound)


@settings(max_examples=200, deadline=None)
@given(series_pairs(), st.integers(1, 30))
def test_truncation_consistent(t, k):
    F, r, _, p = t
    lo = min(p, k)
    if r.is_polynomial():
        # polynomials come back exact at every requested precision
        assert series_from_rational(r, p) == series_from_rational(r, lo)
    else:
        assert series_from_rational(r, p).truncate(lo) == series_from_rational(r, lo)


@settings(max_examples=200, deadline=None)
@given(series_pairs())
def test_integral_plus_fractional(t):
    F, r, _, p = t
    f = series_from_rational(r, p)
    if f.prec < 1:
        return
    a, frac = integral_fractional(f)
    assert (LaurentSeries.from_polynomial(a) + frac) == f
    assert frac.val_bound >= 1


@settings(max_examples=200, deadline=None)
@given(series_pairs())
def test_invert_times_f_is_one_to_horizon(t):
    F, r, _, p = t
    f = series_from_rational(r, p)
    if not f.coeffs:
        # nothing certified below the horizon: no inverse can be claimed
        with pytest.raises(PrecisionExhausted):
            f.invert()
        return
    g = f.invert()
    prod = f * g
    if not f.is_exact():
        assert prod.prec <= p - f.valuation   # relative digits of f
    assert prod.agrees_with(LaurentSeries.one(F))
    # no digit beyond the claimed horizon: the exact inverse agrees too
    exact = series_from_rational(RationalFunction(r.den, r.num), g.prec)
    assert g.agrees_with(exact)
    assert g.prec == INF or exact.truncate(g.prec) == g
