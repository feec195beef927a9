"""Unipotent orbits, cusp excursions and the three-way comparison.

Run: python demos/05_orbits_and_excursions.py
"""

from ffcusp.algebra import GF, Polynomial
from ffcusp.cf import CFSource, golden_spec, pow2_rule
from ffcusp.experiments import (
    PsiSpec, corollary44_check, excursion_profile, orbit_sweep,
    predicted_peaks, profile_peaks,
)

F = GF(3)
f = CFSource(golden_spec(F))

# Delta along the geodesic toward f: bumps where a quotient is consumed
prof = excursion_profile(f, 21)
print('excursion profile:', [d for _, d in prof])
print('peaks:', profile_peaks(prof))
print('predicted:', predicted_peaks(golden_spec(F), 9))

# the orbit of O^2 under u_g, with extremal g read off the convergents
records, est = orbit_sweep(f, Polynomial.one(F), (1, 11), 2)
for r in records:
    tag = f'convergent {r.convergent}' if r.convergent is not None else f'seed {r.tail_seed}'
    print(f'  deg g = {r.deg_g:2d}  Delta = {r.delta:2d}  ratio = {str(r.ratio):5s} ({tag})')
print('sup over the large-|g| half:', est.tail, ' over everything:', est.running)

# the full comparison at default horizons
out = corollary44_check(f, Polynomial.one(F))
print('orbit side', out['lhs'].tail, ' predicted', out['predicted'], ' gap', out['gap'])
out = corollary44_check(f, Polynomial.one(F), PsiSpec.power(2))
print('with psi = 2t:', out['lhs'].tail, 'vs', out['predicted'])

# fast-growing quotients give tall peaks
F2 = GF(2)
rule = pow2_rule(F2)
pred = predicted_peaks(rule, 3)
print('pow2 peaks:', profile_peaks(excursion_profile(CFSource(rule), pred[-1][0] + 3, prec=256)))
print('predicted :', pred)
