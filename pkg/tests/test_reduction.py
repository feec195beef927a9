import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ffcusp.algebra import GF, Polynomial, congruent_mod
from ffcusp.bttree import Mat2, TreeVertex, smith_gap, tree_distance, vertex_from_matrix
from ffcusp.errors import BudgetExceeded
from ffcusp.laurent import LaurentSeries
from ffcusp.reduction import (
    ALatticeBasis,
    brute_force_delta,
    congruence_witness,
    delta_congruence,
    delta_invariant,
    gauss_reduce,
    sl2_count,
)
from strategies import FIELDS, random_lattice, random_sl2, random_vertex, seeded


def X(F, k=1):
    return Polynomial.monomial(F, k)




class TestExamples:
    def test_unimodular(self):
        F = GF(3)
        M = Mat2(F, 1, 0, X(F), 1)
        res = gauss_reduce(M)
        assert res.delta == 0 and res.certified

    def test_diag(self):
        F = GF(3)
        assert delta_invariant(Mat2.diag(F, X(F), 1)) == 1
        assert delta_invariant(Mat2.diag(F, X(F, 5), X(F, 2))) == 3

    def test_brute_force_cap_zero(self):
        F = GF(3)
        assert brute_force_delta(Mat2.diag(F, X(F, 2), 1), 0) == 2

    def test_standard_vertex(self):
        F = GF(5)
        for n in range(6):
            assert delta_invariant(TreeVertex.standard(F, n)) == n

    def test_congruence_examples(self):
        F = GF(3)
        Xp = X(F)
        # already on the standard ray with gamma0 upper triangular
        assert delta_congruence(Mat2.diag(F, Xp, 1), Xp) == 1
        # needs the swap J, whose lower-left entry is a unit
        assert delta_congruence(Mat2.diag(F, 1, Xp), Xp) == 0
        assert delta_congruence(Mat2.diag(F, 1, Xp), Polynomial.one(F)) == 1
        # Delta = 0 always gives 0
        assert delta_congruence(Mat2.identity(F), Xp) == 0

    def test_witness_moves_to_ray(self):
        F = GF(3)
        M = Mat2.diag(F, 1, X(F, 2))
        g = congruence_witness(M, Polynomial.one(F))
        (a, b), (c, d) = g
        assert vertex_from_matrix(Mat2(F, a, b, c, d) @ M) == TreeVertex.standard(F, 2)
        assert congruence_witness(M, X(F)) is None

    def test_budget(self):
        F = GF(3)
        with pytest.raises(BudgetExceeded):
            brute_force_delta(Mat2.identity(F), 4)
        assert brute_force_delta(Mat2.identity(F), 4, budget=3 ** 20) == 0

    def test_zero_qstar(self):
        F = GF(3)
        with pytest.raises(ZeroDivisionError):
            delta_congruence(Mat2.identity(F), Polynomial.zero(F))

    def test_singular(self):
        F = GF(3)
        with pytest.raises(ValueError):
            gauss_reduce(Mat2(F, X(F), 1, X(F), 1))


@pytest.mark.parametrize('q,cap', [(2, 0), (3, 0), (2, 1), (3, 1), (2, 2)])
def test_sl2_table_count(q, cap):
    F = GF(q)
    polys = [Polynomial(F, cs) for cs in itertools.product(range(q), repeat=cap + 1)]
    one = Polynomial.one(F)
    want = sum(1 for a, b, c, d in itertools.product(polys, repeat=4) if a * d - b * c == one)
    assert sl2_count(q, cap) == want
    if cap == 0:
        assert want == q * (q * q - 1)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10 ** 6))
def test_reduction_properties(F, seed):
    rng = seeded(seed)
    M = random_lattice(F, rng, 3)
    res = gauss_reduce(M)
    n1, n2 = res.minima
    L = ALatticeBasis.from_matrix(M)
    # covolume: lambda_1 lambda_2 = |det|
    assert n1 + n2 == -L.detval
    assert res.delta == n2 - n1 >= 0
    assert res.steps <= 2 * (max(L.norms()) - min(L.norms())) + 4
    # gamma0 sends the vertex to [O x X^-delta O]
    g = res.gamma_matrix(F)
    assert g.det() == LaurentSeries.one(F)
    assert vertex_from_matrix(g @ M) == TreeVertex.standard(F, res.delta)
    # Delta is the distance from the vertex to the SL_2(A)-orbit of the origin,
    # hence at most the distance to the origin itself
    assert res.delta <= tree_distance(vertex_from_matrix(M), TreeVertex.standard(F))
    assert res.delta <= smith_gap(M)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10 ** 6))
def test_invariance(F, seed):
    rng = seeded(seed)
    M = random_lattice(F, rng, 3)
    d = delta_invariant(M)
    gamma = random_sl2(F, rng, 2)
    assert delta_invariant(gamma @ M) == d
    assert delta_invariant(M.scale(X(F, 2) + 1)) == d
    # right multiplication by GL_2(O) does not move the vertex
    k = Mat2(F, 1, LaurentSeries.x_power(F, -1), 0, 1)
    assert delta_invariant(M @ k) == d


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10 ** 6))
def test_congruence_bounds(F, seed):
    rng = seeded(seed)
    M = random_lattice(F, rng, 3)
    d = delta_invariant(M)
    assert delta_congruence(M, Polynomial.one(F)) == d
    for Q in (X(F), X(F) + 1, X(F, 2) + 1):
        assert delta_congruence(M, Q) in (0, d)
        w = congruence_witness(M, Q)
        if w is not None and d > 0:
            assert congruent_mod(w[1][0], Q)


@pytest.mark.parametrize('q', [2, 3])
@pytest.mark.parametrize('seed', range(4))
def test_oracle_agrees(q, seed):
    """Gauss reduction against the exhaustive search whenever the reducing
    element lies inside the search box."""
    F = GF(q)
    rng = seeded(1000 + seed)
    cap = 3 if q == 2 else 2
    checked = 0
    for _ in range(25):
        M = random_lattice(F, rng, 3)
        res = gauss_reduce(M)
        if max(e.deg for row in res.gamma0 for e in row) > cap:
            continue
        checked += 1
        assert brute_force_delta(M, cap) == res.delta
        assert brute_force_delta(M, cap, Qstar=X(F)) == delta_congruence(M, X(F))
    assert checked > 10


@pytest.mark.parametrize('seed', range(20))
def test_oracle_upper_bound(seed):
    # any gamma in the box gives an upper bound on Delta
    F = GF(2)
    rng = seeded(seed)
    M = random_lattice(F, rng, 4)
    assert brute_force_delta(M, 2) >= delta_invariant(M)


def test_vertex_input():
    F = GF(3)
    rng = seeded(3)
    v = random_vertex(F, rng)
    assert delta_invariant(v) == delta_invariant(v.matrix())
