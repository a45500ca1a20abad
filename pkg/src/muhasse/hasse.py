"""The mu-ordinary Hasse invariant at a point.

V restricted to Omega = ker(F mod l) swaps Omega_0 and Omega_1.  Going around
twice gives a sigma^{-2}-linear endomorphism of Omega_0 (dimension ar), and its
determinant in the stored basis is the value of the invariant.  The value is
only defined up to the change-of-basis law

    det -> det * sigma^{-2}(det h) / det h

for a change of basis h of Omega_0; whether it vanishes is basis-free.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from . import matrix as mx
from .arith import RingElement
from .dieudonne import HodgePoint
from .semilinear import SemilinearMap, compose, rank_sequence, stable_rank

__all__ = [
    "HasseValue",
    "ver_on_hodge",
    "ver_blocks",
    "ver_squared_on_a",
    "mu_hasse",
    "ell_rank",
    "ver_rank_sequence",
    "is_mu_ordinary",
]


@dataclass(frozen=True)
class HasseValue:
    value: RingElement
    basis_tag: str
    nonvanishing: bool


def ver_on_hodge(H: HodgePoint) -> SemilinearMap:
    """V on Omega = Omega_0 + Omega_1 (twist -1, block antidiagonal)."""
    return H.ver


def ver_blocks(H: HodgePoint) -> tuple[SemilinearMap, SemilinearMap]:
    """(Omega_0 -> Omega_1, Omega_1 -> Omega_0) pieces of V."""
    d0, d1 = H.dims
    mat = H.ver.matrix
    res = H.ver.ring
    to1 = [[mat[d0 + i][j] for j in range(d0)] for i in range(d1)]
    to0 = [[mat[i][d0 + j] for j in range(d1)] for i in range(d0)]
    return (SemilinearMap(to1, -1, res, (d1, d0)), SemilinearMap(to0, -1, res, (d0, d1)))


def ver_squared_on_a(H: HodgePoint) -> SemilinearMap:
    to1, to0 = ver_blocks(H)
    return compose(to0, to1)


def _basis_tag(H: HodgePoint) -> str:
    data = ";".join(" ".join(str(c) for c in v) for v in H.omega0)
    return hashlib.sha256(data.encode()).hexdigest()[:16]


def mu_hasse(H: HodgePoint) -> HasseValue:
    sq = ver_squared_on_a(H)
    res = H.ver.ring
    value = mx.det(sq.matrix) if sq.dims[0] else res.one
    return HasseValue(value, _basis_tag(H), bool(value))


def _bound(H: HodgePoint) -> int:
    return 2 * H.module.params.n


def ell_rank(H: HodgePoint) -> int:
    """Stable rank of V on Omega, read off at j = 2(a+b)r."""
    if H.ver.dims[0] == 0:
        return 0
    return stable_rank(H.ver, _bound(H))


def ver_rank_sequence(H: HodgePoint, bound: int | None = None) -> list[int]:
    """[rank V^j on Omega for j = 1..bound], default bound 2(a+b)r."""
    return rank_sequence(H.ver, bound or _bound(H))


def is_mu_ordinary(H: HodgePoint) -> bool:
    return mu_hasse(H).nonvanishing
