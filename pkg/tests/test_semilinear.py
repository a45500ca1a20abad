import itertools

import pytest
from hypothesis import given, strategies as st

from muhasse import matrix as mx
from muhasse.arith import make_ring
from muhasse.semilinear import (
    SemilinearMap,
    compose,
    iterate,
    kernel_mod_ell,
    rank_mod_ell,
    rank_sequence,
    stable_rank,
)

F4 = make_ring(2, 2, 1)
F9 = make_ring(3, 2, 1)
W = make_ring(3, 2, 4)


def mats(ring, rows, cols):
    e = st.lists(st.integers(0, ring.q - 1), min_size=ring.m, max_size=ring.m).map(ring)
    return st.lists(st.lists(e, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def leibniz_det(X):
    n = len(X)
    ring = X[0][0].ring
    total = ring.zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.one
        for i, p in enumerate(perm):
            term = term * X[i][p]
        total = total - term if inv % 2 else total + term
    return total


def brute_kernel_size(X):
    ring = X[0][0].ring
    elems = list(ring.elements())
    return sum(1 for v in itertools.product(elems, repeat=len(X[0]))
               if not any(mx.matvec(X, list(v))))


@given(mats(F4, 3, 3))
def test_rank_against_brute_force_kernel(X):
    assert brute_kernel_size(X) == 4 ** (3 - mx.rank(X))


@given(mats(F9, 3, 3))
def test_det_against_leibniz(X):
    assert mx.det(X) == leibniz_det(X)


@given(mats(W, 3, 3))
def test_charpoly_against_leibniz(X):
    # det(t - X) at t = c for a few constants c
    coeffs = mx.charpoly(X)
    assert coeffs[-1] == W.one
    for c in (W.zero, W.one, W([2, 5])):
        tX = [[(c if i == j else W.zero) - X[i][j] for j in range(3)] for i in range(3)]
        value = sum((coeffs[i] * c ** i for i in range(4)), W.zero)
        assert value == leibniz_det(tX)


@given(mats(W, 3, 4))
def test_smith_decomposition(X):
    P, vals, Q = mx.smith(X)
    D = mx.matmul(mx.matmul(P, X), Q)
    expected = mx.zeros(W, 3, 4)
    for i, v in enumerate(vals):
        expected[i][i] = W(3 ** v) if v < W.N else W.zero
    assert D == expected
    assert vals == sorted(vals)
    mx.inverse(P)
    mx.inverse(Q)


@given(mats(W, 3, 3))
def test_inverse(X):
    if mx.rank(mx.reduce(X)) == 3:
        assert mx.matmul(X, mx.inverse(X)) == mx.identity(W, 3)
    else:
        with pytest.raises(ValueError):
            mx.inverse(X)


@given(mats(F9, 3, 4))
def test_kernel_with_free_columns(X):
    basis, free = mx.kernel_with_free(X)
    assert len(basis) == 4 - mx.rank(X)
    for i, v in enumerate(basis):
        assert not any(mx.matvec(X, v))
        assert [v[f] for f in free] == [F9.one if j == i else F9.zero for j in range(len(free))]


@given(mats(F9, 3, 3), mats(F9, 3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_composition_matches_application(X, Y, e, f):
    g1 = SemilinearMap.from_matrix(X, e)
    g2 = SemilinearMap.from_matrix(Y, f)
    v = [F9([1, 2]), F9([0, 1]), F9([2, 2])]
    assert compose(g1, g2)(v) == g1(g2(v))
    assert (g1 @ g2).twist == e + f


@given(mats(W, 3, 3), st.integers(-2, 2))
def test_semilinearity(X, e):
    g = SemilinearMap.from_matrix(X, e)
    c = W([1, 1])
    v = [W([2, 0]), W([1, 7]), W([0, 4])]
    assert g([c * x for x in v]) == [c.frobenius(e) * y for y in g(v)]


@given(mats(F9, 3, 3), st.integers(-2, 2))
def test_kernel_mod_ell_is_annihilated(X, e):
    g = SemilinearMap.from_matrix(X, e)
    ker = kernel_mod_ell(g)
    assert len(ker) == 3 - rank_mod_ell(g)
    for v in ker:
        assert not any(g(v))


@given(mats(F4, 4, 4), st.integers(-1, 1))
def test_rank_sequence_nonincreasing_and_stable(X, e):
    g = SemilinearMap.from_matrix(X, e)
    seq = rank_sequence(g, 8)
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    # once two consecutive ranks agree they agree forever
    for j in range(len(seq) - 1):
        if seq[j] == seq[j + 1]:
            assert len(set(seq[j:])) == 1
    assert seq[3:] == [seq[3]] * 5
    assert stable_rank(g, 8) == seq[-1]
    assert [rank_mod_ell(iterate(g, j)) for j in range(1, 9)] == seq


def test_nilpotent_shift():
    one, z = F4.one, F4.zero
    shift = [[z, one, z], [z, z, one], [z, z, z]]
    g = SemilinearMap.from_matrix(shift, -1)
    assert rank_sequence(g, 4) == [2, 1, 0, 0]
    assert iterate(g, 0) == SemilinearMap.identity(F4, 3)


def test_compose_shape_errors():
    g = SemilinearMap.zero(F4, 2, 3)
    with pytest.raises(ValueError):
        compose(g, g)
    with pytest.raises(ValueError):
        rank_sequence(g, 2)
