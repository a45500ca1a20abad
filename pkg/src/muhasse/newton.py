"""Newton polygons of F-crystals and their dominance order.

A polygon is stored as its slope multiset; slopes are exact ``Fraction``s in
[0, 1] and every breakpoint is a lattice point.  ``newton_polygon`` linearizes
F over W_N(F_{l^{2k}}): F^{2k} is honestly linear because sigma^{2k} = 1, and
its char poly's l-adic Newton polygon, scaled by 1/2k, is the polygon of M.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from . import matrix as mx
from .dieudonne import DieudonneModule, PelParams

__all__ = [
    "NewtonPolygon",
    "PrecisionError",
    "mu_ordinary_polygon",
    "newton_polygon",
    "polygon_from_charpoly",
    "lies_on_or_above",
    "is_symmetric",
    "slope_zero_multiplicity",
    "enumerate_symmetric_polygons",
]


class PrecisionError(ArithmeticError):
    """A hull vertex would rest on a coefficient known only to be >= l^N."""


@dataclass(frozen=True)
class NewtonPolygon:
    slopes: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        prev = None
        y = Fraction(0)
        for s, mult in self.slopes:
            if not isinstance(s, Fraction):
                raise TypeError("slopes must be Fractions")
            if mult <= 0:
                raise ValueError("multiplicities must be positive")
            if not 0 <= s <= 1:
                raise ValueError(f"slope {s} outside [0, 1]")
            if prev is not None and s <= prev:
                raise ValueError("slopes must be strictly increasing")
            y += s * mult
            if y.denominator != 1:
                raise ValueError(f"breakpoint after slope {s} is not integral")
            prev = s

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "NewtonPolygon":
        """Merge repeated slopes and sort; accepts anything Fraction() does."""
        acc: dict[Fraction, int] = {}
        for s, mult in pairs:
            s = Fraction(s)
            acc[s] = acc.get(s, 0) + int(mult)
        return cls(tuple(sorted((s, m) for s, m in acc.items() if m)))

    @property
    def height(self) -> int:
        return sum(m for _, m in self.slopes)

    @property
    def endpoint(self) -> Fraction:
        return sum((s * m for s, m in self.slopes), Fraction(0))

    def multiplicity(self, s) -> int:
        s = Fraction(s)
        return next((m for t, m in self.slopes if t == s), 0)

    def vertices(self) -> list[tuple[int, Fraction]]:
        pts = [(0, Fraction(0))]
        for s, m in self.slopes:
            x, y = pts[-1]
            pts.append((x + m, y + s * m))
        return pts

    def value_at(self, x) -> Fraction:
        x = Fraction(x)
        cur_x, cur_y = 0, Fraction(0)
        for s, m in self.slopes:
            if x <= cur_x + m:
                return cur_y + s * (x - cur_x)
            cur_x += m
            cur_y += s * m
        if x == cur_x:
            return cur_y
        raise ValueError(f"x={x} outside [0, {self.height}]")

    def __str__(self) -> str:
        return "{" + ", ".join(f"{s}:{m}" for s, m in self.slopes) + "}"

    def to_csv(self) -> str:
        return "".join(f"{s.numerator}/{s.denominator},{m}\n" for s, m in self.slopes)

    @classmethod
    def parse(cls, text: str) -> "NewtonPolygon":
        """Inverse of ``str`` and ``to_csv``."""
        text = text.strip()
        if text.startswith("{"):
            body = text.strip("{}").strip()
            items = [it.split(":") for it in body.split(",")] if body else []
        else:
            items = [line.split(",") for line in text.splitlines() if line.strip()]
        pairs = []
        for it in items:
            if len(it) != 2:
                raise ValueError(f"bad polygon entry {it!r}")
            pairs.append((Fraction(it[0].strip()), int(it[1])))
        return cls.from_pairs(pairs)


def mu_ordinary_polygon(params: PelParams) -> NewtonPolygon:
    """Slopes 0, 1/2, 1 with multiplicities 2ar, 2(b-a)r, 2ar."""
    a, b, r = params.a, params.b, params.r
    return NewtonPolygon.from_pairs([
        (0, 2 * a * r), (Fraction(1, 2), 2 * (b - a) * r), (1, 2 * a * r)])


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def polygon_from_charpoly(coeffs: list, scale: int = 1, repeat: int = 1) -> NewtonPolygon:
    """l-adic Newton polygon of a monic polynomial given low -> high.

    Root valuations are divided by ``scale`` and multiplicities multiplied by
    ``repeat``.  Coefficients that are zero at precision N sit "above
    everything"; if the hull could pass below one of them, PrecisionError.
    """
    h = len(coeffs) - 1
    N = coeffs[0].ring.N
    vals = [c.valuation() for c in reversed(coeffs)]  # x = h - i
    if vals[0] != 0:
        raise ValueError("polynomial is not monic")
    if vals[h] >= N:
        raise PrecisionError(f"constant term vanishes at precision N={N}")
    known = [(x, v) for x, v in enumerate(vals) if v < N]
    hull = _lower_hull(known)
    for x, v in enumerate(vals):
        if v >= N:
            for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
                if x1 <= x <= x2:
                    if Fraction(y2 - y1, x2 - x1) * (x - x1) + y1 > N:
                        raise PrecisionError(
                            f"coefficient at x={x} is >= ell^{N} but the hull there exceeds {N}")
                    break
    pairs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        pairs.append((Fraction(y2 - y1, (x2 - x1) * scale), (x2 - x1) * repeat))
    return NewtonPolygon.from_pairs(pairs)


def frobenius_power_block(M: DieudonneModule) -> mx.Matrix:
    """Matrix of F^{2k} on M_0: prod_{i<k} sigma^{2i}(B sigma(A))."""
    k = M.params.k
    F2 = mx.matmul(M.B, mx.frobenius(M.A, 1))
    result = F2
    for i in range(1, k):
        result = mx.matmul(result, mx.frobenius(F2, 2 * i))
    return result


def frobenius_power_full(M: DieudonneModule) -> mx.Matrix:
    """Matrix of F^{2k} on all of M (rank 2n)."""
    F = M.frobenius_map().matrix
    result = F
    for i in range(1, 2 * M.params.k):
        result = mx.matmul(result, mx.frobenius(F, i))
    return result


def newton_polygon(M: DieudonneModule, full: bool = False) -> NewtonPolygon:
    """Newton polygon of (M, F), height 2(a+b)r.

    F^{2k} preserves the grading and its restrictions to M_0 and M_1 have the
    same char poly up to sigma (char(XY) = char(YX)), so by default only the
    M_0 block is factored and multiplicities are doubled.  ``full=True`` uses
    the whole rank-2n matrix instead.
    """
    k = M.params.k
    if full:
        return polygon_from_charpoly(mx.charpoly(frobenius_power_full(M)), scale=2 * k)
    return polygon_from_charpoly(mx.charpoly(frobenius_power_block(M)), scale=2 * k, repeat=2)


def _check_comparable(P: NewtonPolygon, Q: NewtonPolygon) -> None:
    if P.height != Q.height or P.endpoint != Q.endpoint:
        raise ValueError(
            f"polygons not comparable: heights {P.height}/{Q.height}, "
            f"endpoints {P.endpoint}/{Q.endpoint}")


def lies_on_or_above(P: NewtonPolygon, Q: NewtonPolygon) -> bool:
    """True iff the graph of P is >= the graph of Q on [0, height]."""
    _check_comparable(P, Q)
    # both are piecewise linear with lattice breakpoints
    return all(P.value_at(x) >= Q.value_at(x) for x in range(P.height + 1))


def is_symmetric(P: NewtonPolygon) -> bool:
    return all(P.multiplicity(1 - s) == m for s, m in P.slopes)


def slope_zero_multiplicity(P: NewtonPolygon) -> int:
    return P.multiplicity(0)


def _farey(limit: int) -> list[Fraction]:
    return sorted({Fraction(p, q) for q in range(1, limit + 1) for p in range(0, q + 1)})


def enumerate_symmetric_polygons(height: int) -> Iterator[NewtonPolygon]:
    """All symmetric lattice polygons of the given height with slopes in [0, 1].

    The part below slope 1/2 determines the rest: it is mirrored to slopes
    1 - s and the middle is filled with slope 1/2 (which needs even length).
    """
    lows = [s for s in _farey(max(height, 1)) if s < Fraction(1, 2)]

    def rec(start: int, budget: int, chosen: list) -> Iterator[list]:
        yield chosen
        for idx in range(start, len(lows)):
            s = lows[idx]
            d = s.denominator
            for mult in range(d, budget + 1, d):
                yield from rec(idx + 1, budget - mult, chosen + [(s, mult)])

    for low in rec(0, height // 2, []):
        used = sum(m for _, m in low)
        middle = height - 2 * used
        if middle % 2:
            continue
        pairs = low + [(1 - s, m) for s, m in low]
        if middle:
            pairs.append((Fraction(1, 2), middle))
        yield NewtonPolygon.from_pairs(pairs)


