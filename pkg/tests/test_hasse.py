import random

import pytest
from hypothesis import given, strategies as st

from muhasse import matrix as mx
from muhasse.dieudonne import (
    HodgePoint,
    PelParams,
    base_change,
    canonical_mu_ordinary,
    hodge,
    random_invertible,
    random_module,
)
from muhasse.hasse import (
    ell_rank,
    is_mu_ordinary,
    mu_hasse,
    ver_blocks,
    ver_rank_sequence,
    ver_squared_on_a,
)
from muhasse.newton import mu_ordinary_polygon, newton_polygon, slope_zero_multiplicity

from conftest import SMALL_GRID

seeds = st.integers(0, 10**6)


@pytest.mark.parametrize("params", SMALL_GRID + [PelParams(2, 1, 2, r=2)], ids=str)
def test_canonical_module_is_mu_ordinary(params):
    H = hodge(canonical_mu_ordinary(params))
    h = mu_hasse(H)
    assert h.nonvanishing
    assert h.value == H.ver.ring.one
    assert ell_rank(H) == params.max_ell_rank


def test_ver_blocks_have_expected_shapes():
    H = hodge(random_module(PelParams(3, 2, 3), 1))
    to1, to0 = ver_blocks(H)
    assert to1.dims == (3, 2) and to0.dims == (2, 3)
    sq = ver_squared_on_a(H)
    assert sq.dims == (2, 2) and sq.twist == -2


@pytest.mark.parametrize("params", SMALL_GRID, ids=str)
@given(seed=seeds)
def test_hasse_iff_max_rank_iff_polygon(params, seed):
    M = random_module(params, seed)
    H = hodge(M)
    P = newton_polygon(M)
    rank = ell_rank(H)
    nonzero = is_mu_ordinary(H)
    assert nonzero == (rank == params.max_ell_rank)
    assert nonzero == (P == mu_ordinary_polygon(params))
    assert rank == slope_zero_multiplicity(P)


def test_a_zero_invariant_is_one():
    p = PelParams(3, 0, 2, allow_degenerate=True)
    H = hodge(random_module(p, 5))
    assert H.dims == (0, 2)
    assert mu_hasse(H).value == H.ver.ring.one
    assert ell_rank(H) == 0


def _omega0_change(M, M2, g0):
    """h with (new Omega_0 basis, seen in old coordinates) = old basis * h."""
    H, H2 = hodge(M), hodge(M2)
    g0bar = mx.reduce(g0)
    cols = []
    for w in H2.omega0:
        cols.append(mx.solve(H.omega0, mx.matvec(g0bar, w)))
    return mx.transpose(cols)


@given(seed=seeds)
def test_transformation_law_k2(seed):
    # value' = value * sigma^{-2}(det h) / det h
    p = PelParams(2, 1, 2, k=2, N=3)
    rng = random.Random(seed)
    M = random_module(p, seed)
    g0 = random_invertible(p.ring, 3, rng)
    g1 = random_invertible(p.ring, 3, rng)
    M2 = base_change(M, g0, g1)
    v, v2 = mu_hasse(hodge(M)).value, mu_hasse(hodge(M2)).value
    d = mx.det(_omega0_change(M, M2, g0))
    assert v2 == v * d.frobenius(-2) / d
    assert bool(v) == bool(v2)


def test_transformation_law_is_visible_for_k2():
    p = PelParams(2, 1, 2, k=2, N=3)
    changed = 0
    for seed in range(40):
        rng = random.Random(seed)
        M = canonical_mu_ordinary(p)
        g0 = random_invertible(p.ring, 3, rng)
        M2 = base_change(M, g0, random_invertible(p.ring, 3, rng))
        changed += mu_hasse(hodge(M2)).value != mu_hasse(hodge(M)).value
    assert changed > 0


@given(seed=seeds)
def test_value_is_basis_free_for_k1(seed):
    p = PelParams(3, 1, 2, N=3)
    rng = random.Random(seed)
    M = random_module(p, seed)
    M2 = base_change(M, random_invertible(p.ring, 3, rng), random_invertible(p.ring, 3, rng))
    assert mu_hasse(hodge(M2)).value == mu_hasse(hodge(M)).value


@pytest.mark.parametrize("params", SMALL_GRID, ids=str)
@given(seed=seeds)
def test_rank_sequence_bounded_and_stable_from_a_plus_b(params, seed):
    seq = ver_rank_sequence(hodge(random_module(params, seed)))
    assert len(seq) == 2 * params.n
    assert max(seq) <= params.max_ell_rank
    assert len(set(seq[params.a + params.b - 1:])) == 1


def test_r2_rank_sequence_can_need_more_than_a_plus_b():
    # with r = 2 and no extra endomorphisms V can act on Omega_0 + Omega_1
    # as one long Jordan chain, so ranks keep dropping past j = a + b
    p = PelParams(2, 1, 2, r=2)
    seq = ver_rank_sequence(hodge(random_module(p, 7)))
    assert seq == [4, 3, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0]
    assert seq[p.a + p.b - 1] != seq[-1]
    assert len(set(seq[p.n - 1:])) == 1


def test_hodge_point_rejects_bad_input():
    M = canonical_mu_ordinary(PelParams(3, 1, 2))
    bad = type(M)(M.params, M.B, M.A, M.Vb, M.Va)
    with pytest.raises(ValueError):
        hodge(bad)
    assert isinstance(hodge(M), HodgePoint)
