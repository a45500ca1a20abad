import itertools
import pickle

import pytest
from hypothesis import given, strategies as st

from muhasse.arith import is_prime, make_ring, valuation

RINGS = [(2, 2, 1), (2, 2, 5), (3, 2, 4), (5, 2, 3), (2, 4, 3), (3, 4, 2), (7, 1, 3)]


def elements(ring):
    coeff = st.integers(0, ring.q - 1)
    return st.lists(coeff, min_size=ring.m, max_size=ring.m).map(ring)


def rings():
    return st.sampled_from(RINGS).map(lambda t: make_ring(*t))


@st.composite
def ring_and_elems(draw, count=3):
    R = draw(rings())
    return (R,) + tuple(draw(elements(R)) for _ in range(count))


def test_is_prime_against_sieve():
    sieve = [True] * 200
    sieve[0] = sieve[1] = False
    for i in range(2, 200):
        if sieve[i]:
            for j in range(i * i, 200, i):
                sieve[j] = False
    assert [is_prime(n) for n in range(200)] == sieve


@pytest.mark.parametrize("ell,m,expected", [
    (2, 2, (1, 1, 1)),
    (3, 2, (1, 0, 1)),
    (5, 2, (2, 0, 1)),
    (2, 4, (1, 1, 0, 0, 1)),
    (7, 1, (0, 1)),
])
def test_modulus_is_first_irreducible(ell, m, expected):
    assert make_ring(ell, m, 1).modulus == expected


def test_f4_multiplication_table():
    # F_4 = {0, 1, w, w+1} with w^2 = w + 1
    R = make_ring(2, 2, 1)
    w = R.gen
    assert w * w == w + 1
    assert w * (w + 1) == R.one
    assert len({(a * b).c for a in R.elements() for b in R.elements() if a and b}) == 3


@given(ring_and_elems())
def test_ring_axioms(t):
    R, x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == R.zero
    assert x * R.one == x


@given(ring_and_elems(2))
def test_frobenius_is_ring_hom(t):
    R, x, y = t
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert x.frobenius(R.m) == x
    assert x.frobenius(1).frobenius(-1) == x


@given(ring_and_elems(1))
def test_frobenius_lifts_ell_power(t):
    R, x = t
    assert (x.frobenius() - x ** R.ell).valuation() >= 1


@given(ring_and_elems(1))
def test_frobenius_on_teichmuller(t):
    # tau = x^{q^(N-1)} is multiplicative, and sigma(tau) = tau^l exactly
    R, x = t
    tau = x ** ((R.ell ** R.m) ** (R.N - 1))
    assert tau.frobenius() == tau ** R.ell


@given(ring_and_elems(1))
def test_sigma_gen_is_root_of_modulus(t):
    R, _ = t
    s = R.gen.frobenius()
    assert sum((s ** i * c for i, c in enumerate(R.modulus)), R.zero) == R.zero


@given(ring_and_elems(1))
def test_inverse(t):
    R, x = t
    if x.is_unit():
        assert x * x.inverse() == R.one
    else:
        with pytest.raises(ZeroDivisionError):
            x.inverse()


@given(ring_and_elems(2))
def test_valuation_is_additive(t):
    R, x, y = t
    vx, vy = valuation(x), valuation(y)
    if vx + vy < R.N:
        assert valuation(x * y) == vx + vy
    assert valuation(x + y) >= min(vx, vy)


def test_valuation_of_zero_is_precision():
    R = make_ring(3, 2, 4)
    assert R.zero.valuation() == 4
    assert R(9).valuation() == 2
    assert R(9).divide_by_ell_power(2) == R.one
    with pytest.raises(ArithmeticError):
        R(3).divide_by_ell_power(2)


def test_reduce_and_lift_commute_with_arithmetic():
    R = make_ring(3, 2, 4)
    S = R.with_precision(2)
    for a, b in itertools.product(range(0, 81, 7), range(1, 81, 11)):
        x, y = R([a, b]), R([b, a])
        assert (x * y).reduce(2) == x.reduce(2) * y.reduce(2)
        assert (x.frobenius()).reduce(2) == x.reduce(2).frobenius()
    assert S(5).lift(4).reduce(2) == S(5)


def test_index_round_trip():
    R = make_ring(2, 2, 2)
    assert [x.index() for x in R.elements()] == list(range(R.size))


def test_rings_are_interned_and_pickle():
    R = make_ring(3, 2, 5)
    assert make_ring(3, 2, 5) is R
    assert pickle.loads(pickle.dumps(R)) is R
    x = R([4, 7])
    assert pickle.loads(pickle.dumps(x)) == x


def test_bad_parameters():
    with pytest.raises(ValueError):
        make_ring(4, 2, 1)
    with pytest.raises(ValueError):
        make_ring(3, 2, 1)([1, 2, 3])
