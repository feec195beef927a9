"""Laurent series in 1/X and their continued fractions.

Run: python demos/01_series_and_continued_fractions.py
"""

from ffcusp.algebra import GF, Polynomial, RationalFunction
from ffcusp.cf import cf_expand, cf_reconstruct, convergents, golden_spec, quadratic_from_equation
from ffcusp.laurent import series_from_rational

F = GF(3)
X = Polynomial.x(F)

# 1/(X^2 + 1) as a series; exact rationals carry their own precision
s = series_from_rational(RationalFunction(Polynomial.one(F), X * X + 1), 12)
print('1/(X^2+1) =', s)

# rational functions have finite expansions
exp = cf_expand(RationalFunction(X * X + 1, X), 10)
print('cf of (X^2+1)/X:', [str(a) for a in exp.quotients], exp.status.value)

# the golden element f = [0; X, X, X, ...] solves f^2 + X f - 1 = 0
src = quadratic_from_equation(RationalFunction(X), RationalFunction(-Polynomial.one(F)))
f = src.series(40)
print('golden f to 40 digits:', f)
print('its quotients:', [str(a) for a in cf_expand(src, 8).quotients])

# convergents and the error law v(f - P/Q) = deg Q_n + deg Q_{n+1}
for c in convergents(golden_spec(F), 6):
    err = f - series_from_rational(RationalFunction(c.P, c.Q), 40)
    print(f'n={c.n}  P/Q = {c.P} / {c.Q}   v(f - P/Q) = {err.valuation}')

# the spec reconstructs the same series
print('reconstruction agrees:', cf_reconstruct(golden_spec(F), 40).agrees_with(f))
