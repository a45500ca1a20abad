"""Exact arithmetic in W_N(F_{l^m}), the truncated Witt vectors of F_{l^m}.

W_N(F_{l^m}) is realized as (Z/l^N)[x]/(f) where f is a monic integer lift of
an irreducible polynomial over F_l.  Because the extension is unramified, the
power basis 1, x, ..., x^{m-1} is a basis over Z/l^N and the l-adic valuation
of an element is the minimum valuation of its coefficients.

The Frobenius lift sigma is determined by sigma(x), the unique root of f that
reduces to x^l mod l; it is stored as the matrix of sigma^e acting on the
power basis, so applying sigma^e costs one m x m integer matrix-vector product.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "WittRing",
    "RingElement",
    "make_ring",
    "frobenius",
    "valuation",
    "is_prime",
]

# Rings with at most this many elements memoize products and Frobenius images.
_CACHE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Polynomials over F_p, coefficient lists low -> high.


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _ppowmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree d <= deg(f)/2."""
    m = len(f) - 1
    if m == 1:
        return True
    xp = [0, 1]
    for _ in range(1, m // 2 + 1):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def _first_irreducible(p: int, m: int) -> tuple[int, ...]:
    # Lexicographic in (c_{m-1}, ..., c_0).
    for n in range(p**m):
        digits = []
        for _ in range(m):
            digits.append(n % p)
            n //= p
        low_to_high = list(digits)  # c_0 is the least significant digit
        f = low_to_high + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")


# ---------------------------------------------------------------------------


class WittRing:
    """The ring W_N(F_{l^m}) with a fixed power basis and Frobenius lift.

    Instances are interned by ``make_ring`` and are immutable, so rings are
    compared by identity and may be shared freely between workers.
    """

    __slots__ = (
        "ell", "m", "N", "q", "modulus", "sigma_gen", "_sigma", "_fold",
        "_mul_cache", "_frob_cache", "_inv_cache", "__weakref__",
    )

    def __init__(self, ell: int, m: int, N: int, modulus: Sequence[int]):
        self.ell = ell
        self.m = m
        self.N = N
        self.q = ell**N
        self.modulus = tuple(c % self.q for c in modulus)
        # x^{m+j} = sum_i fold[j][i] x^i
        fold = []
        cur = [(-c) % self.q for c in self.modulus[:m]]
        for _ in range(max(m - 1, 0)):
            fold.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c + top * fc) % self.q for c, fc in zip(cur, fold[0])]
        self._fold = tuple(fold)
        small = self.size <= _CACHE_LIMIT
        self._mul_cache = {} if small else None
        self._frob_cache = {} if small else None
        self._inv_cache = {}
        self.sigma_gen = self._hensel_sigma()
        self._sigma = self._sigma_matrices()

    # -- construction helpers -------------------------------------------------

    @property
    def size(self) -> int:
        return self.q**self.m

    def _hensel_sigma(self) -> tuple[int, ...]:
        ell, m = self.ell, self.m
        if m == 1:
            return self._gen_tuple()
        # start from x^l reduced mod (f, l), then Newton iteration y <- y - f(y)/f'(y)
        fl = [c % ell for c in self.modulus]
        y = _ppowmod([0, 1], ell, fl, ell)
        y = tuple(y + [0] * (m - len(y)))
        deriv = [i * c for i, c in enumerate(self.modulus)][1:]
        prec = 1
        while True:
            fy = self._eval_poly(self.modulus, y)
            if not any(fy):
                break
            dfy = self._eval_poly(deriv, y)
            step = self._mul(fy, self._inverse(dfy))
            y = tuple((a - b) % self.q for a, b in zip(y, step))
            prec *= 2
            if prec > 2 * self.N + 2:
                raise RuntimeError("Hensel iteration for the Frobenius image did not converge")
        return y

    def _eval_poly(self, coeffs: Sequence[int], y: tuple[int, ...]) -> tuple[int, ...]:
        acc = self._const(0)
        for c in reversed(coeffs):
            acc = self._add(self._mul(acc, y), self._const(c))
        return acc

    def _sigma_matrices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        # column i of sigma is sigma(x)^i; sigma^e is its e-th matrix power
        cols = []
        power = self._const(1)
        for _ in range(self.m):
            cols.append(power)
            power = self._mul(power, self.sigma_gen)
        step = tuple(tuple(cols[j][i] for j in range(self.m)) for i in range(self.m))
        mats = [tuple(tuple(int(i == j) for j in range(self.m)) for i in range(self.m))]
        for _ in range(self.m - 1):
            prev = mats[-1]
            mats.append(tuple(
                tuple(sum(step[i][t] * prev[t][j] for t in range(self.m)) % self.q
                      for j in range(self.m))
                for i in range(self.m)))
        return tuple(mats)

    def _apply_matrix(self, mat, c):
        q = self.q
        return tuple(sum(a * b for a, b in zip(row, c)) % q for row in mat)

    def _gen_tuple(self) -> tuple[int, ...]:
        if self.m == 1:
            return ((-self.modulus[0]) % self.q,)
        return tuple(1 if i == 1 else 0 for i in range(self.m))

    def _const(self, c: int) -> tuple[int, ...]:
        return (c % self.q,) + (0,) * (self.m - 1)

    # -- raw tuple arithmetic -------------------------------------------------

    def _add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def _sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def _mul(self, a, b):
        cache = self._mul_cache
        if cache is not None:
            key = (a, b)
            hit = cache.get(key)
            if hit is not None:
                return hit
        m, q = self.m, self.q
        if m == 1:
            out = (a[0] * b[0] % q,)
        else:
            prod = [0] * (2 * m - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            low = prod[:m]
            for j, hi in enumerate(prod[m:]):
                if hi:
                    for i, fc in enumerate(self._fold[j]):
                        low[i] += hi * fc
            out = tuple(c % q for c in low)
        if cache is not None:
            cache[key] = out
        return out

    def _frob(self, a, e: int):
        e %= self.m
        if e == 0:
            return a
        cache = self._frob_cache
        if cache is not None:
            key = (a, e)
            hit = cache.get(key)
            if hit is not None:
                return hit
        out = self._apply_matrix(self._sigma[e], a)
        if cache is not None:
            cache[key] = out
        return out

    def _valuation(self, a) -> int:
        v = self.N
        for c in a:
            if c:
                v = min(v, _vp(c, self.ell))
        return v

    def _inverse(self, a):
        hit = self._inv_cache.get(a)
        if hit is not None:
            return hit
        ell = self.ell
        if all(c % ell == 0 for c in a):
            raise ZeroDivisionError("element is not a unit")
        # invert mod l by exponentiation in F_{l^m}, then Newton-lift
        fl = [c % ell for c in self.modulus]
        y = _ppowmod([c % ell for c in a], ell**self.m - 2, fl, ell)
        y = tuple(y + [0] * (self.m - len(y)))
        two = self._const(2)
        prec = 1
        while prec < self.N:
            y = self._mul(y, self._sub(two, self._mul(a, y)))
            prec *= 2
        if self.size <= _CACHE_LIMIT:
            self._inv_cache[a] = y
        return y

    # -- public API ------------------------------------------------------------

    def __call__(self, value: int | Iterable[int] | "RingElement" = 0) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring is self:
                return value
            if value.ring.ell != self.ell or value.ring.modulus_mod_ell != self.modulus_mod_ell:
                raise ValueError("incompatible rings")
            return RingElement(self, tuple(c % self.q for c in value.c))
        if isinstance(value, int):
            return RingElement(self, self._const(value))
        coeffs = [int(c) for c in value]
        if len(coeffs) > self.m:
            raise ValueError(f"expected at most {self.m} coefficients, got {len(coeffs)}")
        coeffs += [0] * (self.m - len(coeffs))
        return RingElement(self, tuple(c % self.q for c in coeffs))

    @property
    def modulus_mod_ell(self) -> tuple[int, ...]:
        return tuple(c % self.ell for c in self.modulus)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.m)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, self._const(1))

    @property
    def gen(self) -> "RingElement":
        return RingElement(self, self._gen_tuple())

    def residue(self) -> "WittRing":
        return make_ring(self.ell, self.m, 1)

    def with_precision(self, N: int) -> "WittRing":
        return make_ring(self.ell, self.m, N)

    def random(self, rng) -> "RingElement":
        return RingElement(self, tuple(rng.randrange(self.q) for _ in range(self.m)))

    def elements(self):
        """All elements, in the order of ``from_index``."""
        for i in range(self.size):
            yield self.from_index(i)

    def from_index(self, i: int) -> "RingElement":
        coeffs = []
        for _ in range(self.m):
            coeffs.append(i % self.q)
            i //= self.q
        return RingElement(self, tuple(coeffs))

    def __repr__(self) -> str:
        return f"WittRing(ell={self.ell}, m={self.m}, N={self.N}, modulus={self.modulus})"

    def __reduce__(self):
        return (make_ring, (self.ell, self.m, self.N))


class RingElement:
    """An element of a ``WittRing``, stored as m coefficients mod l^N."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: WittRing, c: tuple[int, ...]):
        self.ring = ring
        self.c = c

    def _coerce(self, other) -> tuple[int, ...]:
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise ValueError("elements of different rings")
            return other.c
        if isinstance(other, int):
            return self.ring._const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring._add(self.c, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring._sub(self.c, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring._sub(o, self.c))

    def __neg__(self):
        q = self.ring.q
        return RingElement(self.ring, tuple(-x % q for x in self.c))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring._mul(self.c, o))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring is other.ring and self.c == other.c
        if isinstance(other, int):
            return self.c == self.ring._const(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"RingElement({list(self.c)})"

    def __str__(self):
        return ",".join(str(x) for x in self.c)

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, self.ring._inverse(self.c))

    def is_unit(self) -> bool:
        ell = self.ring.ell
        return any(x % ell for x in self.c)

    def frobenius(self, e: int = 1) -> "RingElement":
        return RingElement(self.ring, self.ring._frob(self.c, e))

    def valuation(self) -> int:
        return self.ring._valuation(self.c)

    def reduce(self, N: int = 1) -> "RingElement":
        """Image in W_N for a smaller precision N (default: the residue field)."""
        if N == self.ring.N:
            return self
        target = self.ring.with_precision(N)
        return RingElement(target, tuple(x % target.q for x in self.c))

    def lift(self, N: int) -> "RingElement":
        """Coefficientwise lift to precision N using representatives in [0, l^N_old)."""
        target = self.ring.with_precision(N)
        return RingElement(target, tuple(x % target.q for x in self.c))

    def divide_by_ell_power(self, v: int) -> "RingElement":
        """Some y with l^v * y == self; requires valuation >= v."""
        d = self.ring.ell**v
        if any(x % d for x in self.c):
            raise ArithmeticError(f"element not divisible by ell^{v}")
        return RingElement(self.ring, tuple(x // d for x in self.c))

    def index(self) -> int:
        i = 0
        for x in reversed(self.c):
            i = i * self.ring.q + x
        return i


@lru_cache(maxsize=None)
def make_ring(ell: int, m: int, N: int) -> WittRing:
    """W_N(F_{ell^m}) with the lexicographically first irreducible modulus."""
    if not is_prime(ell):
        raise ValueError(f"ell={ell} is not prime")
    if m < 1 or N < 1:
        raise ValueError("need m >= 1 and N >= 1")
    return WittRing(ell, m, N, _first_irreducible(ell, m))


def frobenius(x: RingElement, e: int = 1) -> RingElement:
    """sigma^e(x); negative e is taken mod m since sigma has order m."""
    return x.frobenius(e)


def valuation(x: RingElement) -> int:
    """l-adic valuation; returns N (meaning ">= N") when x == 0."""
    return x.valuation()
