"""Gauss reduction of rank two F_q[X]-lattices and the cusp depth Delta.

Run: python demos/03_lattice_reduction.py
"""

import random

from ffcusp.algebra import GF, Polynomial
from ffcusp.bttree import Mat2, vertex_from_matrix
from ffcusp.reduction import brute_force_delta, delta_congruence, gauss_reduce

F = GF(3)
X = Polynomial.x(F)

M = Mat2(F, X ** 3 + 1, X ** 2, X + 2, X ** 2 + X)
res = gauss_reduce(M)
print('basis', M)
print('Delta =', res.delta, ' minima (log_q) =', res.minima, ' steps =', res.steps)
print('gamma0 =', [[str(e) for e in row] for row in res.gamma0])
print('gamma0 M lands on', vertex_from_matrix(res.gamma_matrix(F) @ M))

# the exhaustive search over SL_2 elements with small entries agrees
print('brute force (entries deg <= 2):', brute_force_delta(M, 2))

# Delta_{Q*} only counts reductions inside Gamma^0(Q*)
for Q in (Polynomial.one(F), X, X + 1):
    print(f'Delta_{{{Q}}} =', delta_congruence(M, Q))

# a small random survey
rng = random.Random(0)
counts = {}
for _ in range(300):
    ents = [Polynomial(F, [rng.randrange(3) for _ in range(4)]) for _ in range(4)]
    if ents[0] * ents[3] == ents[1] * ents[2]:
        continue
    d = gauss_reduce(Mat2(F, *ents)).delta
    counts[d] = counts.get(d, 0) + 1
print('Delta histogram over 300 random lattices:', dict(sorted(counts.items())))
