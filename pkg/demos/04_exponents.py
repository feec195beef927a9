"""Irrationality exponents from continued fractions.

Run: python demos/04_exponents.py
"""

from ffcusp.algebra import GF, Polynomial
from ffcusp.cf import golden_spec, pow2_rule
from ffcusp.experiments import cf_side_rate, exponent_estimate, nu_estimate

F3, F2 = GF(3), GF(2)

# golden: all quotients have degree one, so nu = 2
est = exponent_estimate(golden_spec(F3), Polynomial.one(F3), 50)
print('golden   nu ~', nu_estimate(est), '=', float(nu_estimate(est)))

# a_n = X^(2^n) grows fast enough to push nu to 3
est = exponent_estimate(pow2_rule(F2), Polynomial.one(F2), 12)
print('pow2     nu ~', nu_estimate(est), '=', float(nu_estimate(est)))

# restricting to denominators divisible by X
X = Polynomial.x(F3)
side = cf_side_rate(golden_spec(F3), X, 20)
print('indices with X | Q_n:', [n for n, _ in side.history])
print('cf side values:', [str(v) for v in side.values()])
