"""Shared hypothesis strategies and small builders for the test-suite."""

import random

from hypothesis import strategies as st

from ffcusp.algebra import GF, Polynomial, gcd
from ffcusp.bttree import Mat2, TreeVertex
from ffcusp.cf import CFSpec, solve_unit_row
from ffcusp.laurent import LaurentSeries

FIELDS = [GF(2), GF(3), GF(5)]

fields = st.sampled_from(FIELDS)


def polys(F, max_deg=6, nonzero=False):
    cs = st.lists(st.integers(0, F.q - 1), min_size=0, max_size=max_deg + 1)
    out = cs.map(lambda c: Polynomial(F, c))
    return out.filter(bool) if nonzero else out


def laurent_polys(F, lo=-4, hi=6):
    """Exact Laurent polynomials with exponents of X in [lo, hi]."""
    return st.dictionaries(st.integers(-hi, -lo), st.integers(1, F.q - 1), max_size=6).map(
        lambda t: LaurentSeries.from_terms(F, t))


def vertices(F, level=(-6, 6), width=6):
    @st.composite
    def build(draw):
        m = draw(st.integers(*level))
        lo = m - width
        terms = draw(st.dictionaries(st.integers(lo, m - 1), st.integers(1, F.q - 1),
                                     max_size=width))
        return TreeVertex.make(F, m, LaurentSeries.from_terms(F, terms))
    return build()


def random_poly(F, rng, max_deg):
    return Polynomial(F, [rng.randrange(F.q) for _ in range(max_deg + 1)])


def random_sl2(F, rng, max_deg=2):
    """A random element of SL_2(F_q[X]) with modest degrees."""
    while True:
        a = random_poly(F, rng, max_deg)
        b = random_poly(F, rng, max_deg)
        if (a or b) and gcd(a, b).deg == 0:
            c, d = solve_unit_row(a, b)
            return Mat2(F, a, b, c, d)


def random_gl2_poly(F, rng, max_deg=2):
    """A random invertible 2x2 matrix with polynomial entries."""
    while True:
        ents = [random_poly(F, rng, max_deg) for _ in range(4)]
        if ents[0] * ents[3] - ents[1] * ents[2]:
            return Mat2(F, *ents)


def random_gl2_O(F, rng, depth=4):
    """A random element of GL_2(O): entries are polynomials in X^-1 and the
    determinant has a nonzero constant term."""
    while True:
        ents = [LaurentSeries.from_terms(F, {i: rng.randrange(F.q) for i in range(depth)})
                for _ in range(4)]
        M = Mat2(F, *ents)
        det = M.det()
        if det.coeffs and det.start == 0:
            return M


def random_lattice(F, rng, max_deg=4):
    """Uniform polynomial entries of degree <= max_deg, nonzero determinant."""
    return random_gl2_poly(F, rng, max_deg)


def random_vertex(F, rng, level=(-6, 6), width=6):
    m = rng.randint(*level)
    terms = {i: rng.randrange(F.q) for i in range(m - width, m)}
    return TreeVertex.make(F, m, LaurentSeries.from_terms(F, terms))


def random_cf_spec(F, rng, n=12, max_deg=3, periodic=True):
    a0 = random_poly(F, rng, 2)
    qs = []
    for _ in range(n):
        d = rng.randint(1, max_deg)
        qs.append(Polynomial(F, [rng.randrange(F.q) for _ in range(d)] + [rng.randrange(1, F.q)]))
    if periodic:
        k = rng.randint(1, 3)
        return CFSpec(a0, tuple(qs[:-k]), tuple(qs[-k:]))
    return CFSpec(a0, tuple(qs))


def seeded(seed):
    return random.Random(seed)
