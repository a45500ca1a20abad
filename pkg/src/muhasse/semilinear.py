"""sigma^e-linear maps between free modules over a ``WittRing``.

A ``SemilinearMap`` with matrix X and twist e acts on coordinate vectors by
v -> X sigma^e(v), so f(c v) = sigma^e(c) f(v).  With this convention

    mat(f o g) = mat(f) * sigma^{twist f}(mat(g)),   twist(f o g) = twist f + twist g.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .arith import WittRing

__all__ = [
    "SemilinearMap",
    "compose",
    "rank_mod_ell",
    "iterate",
    "rank_sequence",
    "stable_rank",
    "kernel_mod_ell",
]


@dataclass(frozen=True, eq=False)
class SemilinearMap:
    matrix: mx.Matrix
    twist: int
    ring: WittRing
    dims: tuple[int, int]  # (target rank, source rank)

    @classmethod
    def from_matrix(cls, matrix: mx.Matrix, twist: int, ring: WittRing | None = None,
                    source_rank: int | None = None) -> "SemilinearMap":
        if ring is None:
            ring = matrix[0][0].ring
        rows = len(matrix)
        cols = len(matrix[0]) if matrix else (source_rank or 0)
        if source_rank is not None and cols != source_rank:
            raise ValueError("source rank does not match matrix")
        return cls(matrix, twist, ring, (rows, cols))

    @classmethod
    def identity(cls, ring: WittRing, n: int) -> "SemilinearMap":
        return cls(mx.identity(ring, n), 0, ring, (n, n))

    @classmethod
    def zero(cls, ring: WittRing, target: int, source: int, twist: int = 0) -> "SemilinearMap":
        return cls(mx.zeros(ring, target, source), twist, ring, (target, source))

    @property
    def is_square(self) -> bool:
        return self.dims[0] == self.dims[1]

    def __call__(self, v: mx.Vector) -> mx.Vector:
        if len(v) != self.dims[1]:
            raise ValueError(f"vector of length {len(v)} for source rank {self.dims[1]}")
        if self.dims[0] == 0:
            return []
        sv = [c.frobenius(self.twist) for c in v]
        return [sum((a * b for a, b in zip(row, sv)), self.ring.zero) for row in self.matrix]

    def __matmul__(self, other: "SemilinearMap") -> "SemilinearMap":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, SemilinearMap):
            return NotImplemented
        return (self.ring is other.ring and self.dims == other.dims
                and (self.twist - other.twist) % self.ring.m == 0
                and self.matrix == other.matrix)

    def reduce(self) -> "SemilinearMap":
        """The same map with entries reduced mod l."""
        res = self.ring.residue()
        return SemilinearMap(mx.reduce(self.matrix, 1), self.twist, res, self.dims)


def compose(f: SemilinearMap, g: SemilinearMap) -> SemilinearMap:
    """f o g."""
    if f.ring is not g.ring:
        raise ValueError("maps over different rings")
    if f.dims[1] != g.dims[0]:
        raise ValueError(f"cannot compose {f.dims} after {g.dims}")
    target, source = f.dims[0], g.dims[1]
    if target == 0 or source == 0 or f.dims[1] == 0:
        return SemilinearMap.zero(f.ring, target, source, f.twist + g.twist)
    mat = mx.matmul(f.matrix, mx.frobenius(g.matrix, f.twist))
    return SemilinearMap(mat, f.twist + g.twist, f.ring, (target, source))


def rank_mod_ell(f: SemilinearMap) -> int:
    """Rank of the matrix mod l over the residue field; the twist is irrelevant."""
    if 0 in f.dims:
        return 0
    return mx.rank(mx.reduce(f.matrix, 1))


def iterate(f: SemilinearMap, j: int) -> SemilinearMap:
    if not f.is_square:
        raise ValueError("iterate needs an endomorphism")
    if j < 0:
        raise ValueError("j must be >= 0")
    result = SemilinearMap.identity(f.ring, f.dims[0])
    for _ in range(j):
        result = compose(f, result)
    return result


def rank_sequence(f: SemilinearMap, bound: int) -> list[int]:
    """[rank f^1, ..., rank f^bound] mod l."""
    if not f.is_square:
        raise ValueError("rank_sequence needs an endomorphism")
    g = f.reduce() if f.ring.N > 1 else f
    ranks = []
    power = g
    for j in range(1, bound + 1):
        ranks.append(rank_mod_ell(power))
        if j < bound:
            power = compose(g, power)
    return ranks


def stable_rank(f: SemilinearMap, bound: int) -> int:
    """Eventual rank of the iterates of f, read off at j = bound.

    The rank sequence is non-increasing and constant from the first repeat on,
    so it has stabilized once bound >= the source rank.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if not f.is_square:
        raise ValueError("stable_rank needs an endomorphism")
    if f.dims[0] == 0:
        return 0
    return rank_sequence(f, bound)[-1]


def kernel_mod_ell(f: SemilinearMap) -> list[mx.Vector]:
    """Residue-field basis of the kernel of f mod l.

    For v -> X sigma^e(v) the kernel is sigma^{-e}(ker X), so its dimension is
    source rank - rank_mod_ell(f).
    """
    res = f.ring.residue()
    target, source = f.dims
    if source == 0:
        return []
    if target == 0:
        return [v for v in mx.identity(res, source)]
    return [[c.frobenius(-f.twist) for c in v] for v in mx.kernel(mx.reduce(f.matrix, 1))]
