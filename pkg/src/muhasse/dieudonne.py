"""Graded, polarized Dieudonne modules with unitary structure at an inert prime.

A module is M = M_0 + M_1, each free of rank n = (a+b)r over W_N(F_{l^{2k}}).
F is sigma-linear and swaps the summands:

    F(x_0) = A sigma(x_0) in M_1,    F(x_1) = B sigma(x_1) in M_0,

and V = l F^{-1} is sigma^{-1}-linear with matrices Va (M_0 -> M_1) and
Vb (M_1 -> M_0).  The pairing identifies M_1 with the dual of M_0 through a Gram
matrix G, extended symmetrically to M:

    <x, y> = x_0^T G y_1 + y_0^T G x_1.

With G = 1 the identity <Fx, y> = sigma(<x, Vy>) forces B = l A^{-T},
Va = sigma^{-1}(A^T) and Vb = sigma^{-1}(B^T).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace

from . import matrix as mx
from .arith import RingElement, WittRing, is_prime, make_ring
from .semilinear import SemilinearMap

__all__ = [
    "PelParams",
    "DieudonneModule",
    "HodgePoint",
    "ModuleFormatError",
    "validate",
    "from_F_block",
    "from_blocks",
    "canonical_mu_ordinary",
    "random_module",
    "random_invertible",
    "hodge",
    "base_change",
    "parse_module",
    "format_module",
]


@dataclass(frozen=True)
class PelParams:
    """Signature (a, b), multiplicity r, field F_{l^{2k}} and Witt precision N.

    ``allow_degenerate`` admits a == b (no slope-1/2 part) and a == 0; the
    inert, a < b setting is otherwise enforced.
    """

    ell: int
    a: int
    b: int
    r: int = 1
    k: int = 1
    N: int | None = None
    allow_degenerate: bool = False

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"ell={self.ell} is not prime")
        if self.r < 1 or self.k < 1:
            raise ValueError("need r >= 1 and k >= 1")
        if self.allow_degenerate:
            if not (0 <= self.a <= self.b and self.b >= 1):
                raise ValueError("need 0 <= a <= b, b >= 1")
        elif not (1 <= self.a < self.b):
            raise ValueError(
                f"signature ({self.a},{self.b}) unsupported: need 1 <= a < b "
                "(a >= b means a split prime; pass allow_degenerate to force a == b)")
        if self.N is None:
            object.__setattr__(self, "N", self.default_precision)
        elif self.N < 1:
            raise ValueError("need N >= 1")

    @property
    def n(self) -> int:
        """Rank of each graded piece, (a+b)r."""
        return (self.a + self.b) * self.r

    @property
    def height(self) -> int:
        return 2 * self.n

    @property
    def m(self) -> int:
        return 2 * self.k

    @property
    def default_precision(self) -> int:
        return 2 * self.m * self.n + 1

    @property
    def max_ell_rank(self) -> int:
        return 2 * self.a * self.r

    @property
    def ring(self) -> WittRing:
        return make_ring(self.ell, self.m, self.N)

    def with_precision(self, N: int) -> "PelParams":
        return replace(self, N=N)


@dataclass(frozen=True, eq=False)
class DieudonneModule:
    params: PelParams
    A: mx.Matrix   # F : M_0 -> M_1
    B: mx.Matrix   # F : M_1 -> M_0
    Va: mx.Matrix  # V : M_0 -> M_1
    Vb: mx.Matrix  # V : M_1 -> M_0
    gram: mx.Matrix = field(default=None)

    def __post_init__(self):
        if self.gram is None:
            object.__setattr__(self, "gram", mx.identity(self.ring, self.params.n))

    @property
    def ring(self) -> WittRing:
        return self.params.ring

    @property
    def n(self) -> int:
        return self.params.n

    def frobenius_map(self) -> SemilinearMap:
        """F on M = M_0 + M_1 as a twist-1 map of rank 2n."""
        z = mx.zeros(self.ring, self.n, self.n)
        return SemilinearMap(mx.block([[z, self.B], [self.A, z]]), 1, self.ring,
                             (2 * self.n, 2 * self.n))

    def verschiebung_map(self) -> SemilinearMap:
        z = mx.zeros(self.ring, self.n, self.n)
        return SemilinearMap(mx.block([[z, self.Vb], [self.Va, z]]), -1, self.ring,
                             (2 * self.n, 2 * self.n))

    def truncate(self, N: int) -> "DieudonneModule":
        """The same module at a lower precision."""
        if N > self.params.N:
            raise ValueError("cannot raise precision by truncation")
        red = lambda X: mx.reduce(X, N)  # noqa: E731
        return DieudonneModule(self.params.with_precision(N), red(self.A), red(self.B),
                               red(self.Va), red(self.Vb), red(self.gram))

    def __eq__(self, other):
        if not isinstance(other, DieudonneModule):
            return NotImplemented
        return (self.params == other.params and self.A == other.A and self.B == other.B
                and self.Va == other.Va and self.Vb == other.Vb and self.gram == other.gram)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class HodgePoint:
    """Omega = ker(F mod l) with its grading and the restriction of V.

    ``omega0``/``omega1`` hold residue-field coordinate vectors in M_0/M_1;
    ``ver`` is the twist -1 endomorphism of Omega in the basis omega0 + omega1.
    """

    module: DieudonneModule
    omega0: list
    omega1: list
    ver: SemilinearMap

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.omega0), len(self.omega1)


class ModuleFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# validation


def _sigma_inv(v):
    return [c.frobenius(-1) for c in v]


def _ell_identity(ring: WittRing, n: int) -> mx.Matrix:
    return mx.diagonal(ring, [ring.ell] * n)


def _polarization_holds(M: DieudonneModule) -> bool:
    # <F e_i, e_j> = (F^T Pi)_{ij} and <e_i, V e_j> = (Pi V)_{ij}
    ring, n = M.ring, M.n
    z = mx.zeros(ring, n, n)
    Pi = mx.block([[z, M.gram], [mx.transpose(M.gram), z]])
    Fm = M.frobenius_map().matrix
    Vm = M.verschiebung_map().matrix
    lhs = mx.matmul(mx.transpose(Fm), Pi)
    rhs = mx.frobenius(mx.matmul(Pi, Vm), 1)
    return lhs == rhs


def validate(M: DieudonneModule, strict_pairing: bool = False) -> list[str]:
    """Violated invariants of M, in a fixed order; empty means valid.

    With ``strict_pairing`` the Gram matrix must also be the identity (the
    standard pairing), which fails after a base change that is not
    pairing-compatible.
    """
    p = M.params
    ring, n = M.ring, p.n
    findings = []
    for name in ("A", "B", "Va", "Vb", "gram"):
        X = getattr(M, name)
        if mx.shape(X) != (n, n):
            findings.append(f"grading: block {name} has shape {mx.shape(X)}, expected ({n}, {n})")
    if findings:
        return findings

    ell_I = _ell_identity(ring, n)
    checks = [
        ("FV on M_1", mx.matmul(M.A, mx.frobenius(M.Vb, 1))),
        ("FV on M_0", mx.matmul(M.B, mx.frobenius(M.Va, 1))),
        ("VF on M_0", mx.matmul(M.Vb, mx.frobenius(M.A, -1))),
        ("VF on M_1", mx.matmul(M.Va, mx.frobenius(M.B, -1))),
    ]
    for label, prod in checks:
        if prod != ell_I:
            findings.append(f"fv: {label} is not ell * identity")

    Abar, Bbar = mx.reduce(M.A), mx.reduce(M.B)
    ker0 = n - mx.rank(Abar)
    ker1 = n - mx.rank(Bbar)
    if ker0 != p.a * p.r or ker1 != p.b * p.r:
        findings.append(
            f"signature: dim ker F on (M_0, M_1) mod ell is ({ker0}, {ker1}), "
            f"expected ({p.a * p.r}, {p.b * p.r})")

    if p.N >= 2:
        want_a = [0] * (p.b * p.r) + [1] * (p.a * p.r)
        want_b = [0] * (p.a * p.r) + [1] * (p.b * p.r)
        got_a = mx.elementary_divisor_valuations(M.A)
        got_b = mx.elementary_divisor_valuations(M.B)
        if got_a != want_a:
            findings.append(f"smith: elementary divisor valuations of A are {got_a}, expected {want_a}")
        if got_b != want_b:
            findings.append(f"smith: elementary divisor valuations of B are {got_b}, expected {want_b}")

    if not _polarization_holds(M):
        findings.append("polarization: <Fx, y> != sigma(<x, Vy>)")
    if strict_pairing and M.gram != mx.identity(ring, n):
        findings.append("polarization: pairing is not the standard pairing")

    # BT_1 condition: ker F = im V mod ell on both graded pieces
    for label, F_blk, V_blk in (("M_0", Abar, mx.reduce(M.Vb)), ("M_1", Bbar, mx.reduce(M.Va))):
        ker = [_sigma_inv(v) for v in mx.kernel(F_blk)]
        if mx.span_basis(ker) != mx.column_space(V_blk):
            findings.append(f"hodge: ker F != im V on {label} mod ell")
    return findings


# ---------------------------------------------------------------------------
# construction


def from_blocks(params: PelParams, A: mx.Matrix, B: mx.Matrix) -> DieudonneModule:
    """Module with the given F-blocks, standard pairing and V by transposition."""
    return DieudonneModule(params, A, B, mx.frobenius(mx.transpose(A), -1),
                           mx.frobenius(mx.transpose(B), -1))


def from_F_block(params: PelParams, A: mx.Matrix) -> DieudonneModule:
    """The polarized module whose F restricted to M_0 has matrix A.

    B = l A^{-T} is computed through a Smith decomposition P A Q = D, so that
    B = P^T (l D^{-1}) Q^T.  For N == 1 this is the mod-l rule: B is zero on
    the image of A^T and an isomorphism from the complement picked out by the
    elimination.
    """
    ring, n = params.ring, params.n
    A = [[ring(x) for x in row] for row in A]
    if mx.shape(A) != (n, n):
        raise ValueError(f"A must be {n} x {n}")
    P, vals, Q = mx.smith(A)
    want = [0] * (params.b * params.r) + [1] * (params.a * params.r)
    if vals != want:
        raise ValueError(
            f"A has elementary divisor valuations {vals}; signature "
            f"({params.a},{params.b}) needs {want}")
    scaled = mx.diagonal(ring, [ring.ell ** (1 - v) for v in vals])
    B = mx.matmul(mx.matmul(mx.transpose(P), scaled), mx.transpose(Q))
    return from_blocks(params, A, B)


def _blocks_from_factors(params: PelParams, U1, U2):
    ring = params.ring
    ar, br = params.a * params.r, params.b * params.r
    D = mx.diagonal(ring, [1] * br + [ring.ell] * ar)
    lDinv = mx.diagonal(ring, [ring.ell] * br + [1] * ar)
    A = mx.matmul(mx.matmul(U1, D), U2)
    B = mx.matmul(mx.matmul(mx.transpose(mx.inverse(U1)), lDinv), mx.transpose(mx.inverse(U2)))
    return A, B


def canonical_mu_ordinary(params: PelParams) -> DieudonneModule:
    """Sum of ar ordinary pairs and (b-a)r slope-1/2 blocks.

    Ordinary pair: e0, f0 in M_0 and e1, f1 in M_1 with F e0 = e1, F e1 = e0,
    F f0 = l f1, F f1 = l f0.  Slope-1/2 block: F g0 = g1, F g1 = l g0.
    M_0 is ordered (e0, f0, ..., g0, ...) and M_1 is ordered (f1, e1, ..., g1, ...)
    so that the standard pairing puts e0 against f1 and f0 against e1.
    """
    ring, n = params.ring, params.n
    ar = params.a * params.r
    ell = ring(ring.ell)
    A = mx.zeros(ring, n, n)
    B = mx.zeros(ring, n, n)
    for i in range(ar):
        e, f = 2 * i, 2 * i + 1  # e0, f0 in M_0; f1, e1 in M_1 at the same slots
        A[f][e] = ring.one   # e0 -> e1
        A[e][f] = ell        # f0 -> l f1
        B[f][e] = ell        # f1 -> l f0
        B[e][f] = ring.one   # e1 -> e0
    for g in range(2 * ar, n):
        A[g][g] = ring.one   # g0 -> g1
        B[g][g] = ell        # g1 -> l g0
    return from_blocks(params, A, B)


def random_invertible(ring: WittRing, n: int, rng: random.Random) -> mx.Matrix:
    """Uniform element of GL_n(W_N) by rejection sampling."""
    while True:
        U = [[ring.random(rng) for _ in range(n)] for _ in range(n)]
        if n == 0 or mx.rank(mx.reduce(U)) == n:
            return U


def random_module(params: PelParams, seed: int) -> DieudonneModule:
    """A = U1 diag(1^{br}, l^{ar}) U2 with seeded uniform U1, U2 in GL_n(W_N)."""
    rng = random.Random(seed)
    ring, n = params.ring, params.n
    U1 = random_invertible(ring, n, rng)
    U2 = random_invertible(ring, n, rng)
    A, B = _blocks_from_factors(params, U1, U2)
    return from_blocks(params, A, B)


def hodge(M: DieudonneModule) -> HodgePoint:
    """Omega = ker(F mod l) split as Omega_0 + Omega_1, with V restricted to it.

    Raises ValueError if the graded dimensions are not (ar, br) or if
    ker F != im V mod l.
    """
    p = M.params
    res = M.ring.residue()
    n = p.n
    Abar, Bbar = mx.reduce(M.A), mx.reduce(M.B)
    Vabar, Vbbar = mx.reduce(M.Va), mx.reduce(M.Vb)
    # ker of x -> A sigma(x) is sigma^{-1}(ker A); sigma^{-1} keeps the 0/1 pattern
    # on the free columns, so coordinates are still read off there
    omega0, free0 = mx.kernel_with_free(Abar)
    omega1, free1 = mx.kernel_with_free(Bbar)
    omega0 = [_sigma_inv(v) for v in omega0]
    omega1 = [_sigma_inv(v) for v in omega1]
    d0, d1 = len(omega0), len(omega1)
    if (d0, d1) != (p.a * p.r, p.b * p.r):
        raise ValueError(f"Hodge dimensions ({d0}, {d1}) do not match the signature")
    if mx.span_basis(omega0) != mx.column_space(Vbbar) or \
            mx.span_basis(omega1) != mx.column_space(Vabar):
        raise ValueError("ker F != im V mod ell")

    # V(omega) for omega in Omega_0 lands in Omega_1 and vice versa
    d = d0 + d1
    mat = mx.zeros(res, d, d)
    for j, w in enumerate(omega0):
        img = mx.matvec(Vabar, [c.frobenius(-1) for c in w])
        for i, f in enumerate(free1):
            mat[d0 + i][j] = img[f]
    for j, w in enumerate(omega1):
        img = mx.matvec(Vbbar, [c.frobenius(-1) for c in w])
        for i, f in enumerate(free0):
            mat[i][d0 + j] = img[f]
    ver = SemilinearMap(mat, -1, res, (d, d))
    return HodgePoint(M, omega0, omega1, ver)


def base_change(M: DieudonneModule, g0: mx.Matrix, g1: mx.Matrix) -> DieudonneModule:
    """Express M in the new bases given by the columns of g0 (on M_0) and g1 (on M_1).

    The pairing is transported (G -> g0^T G g1), so the result stays polarized;
    ``validate(..., strict_pairing=True)`` flags a non-standard Gram matrix.
    """
    ring = M.ring
    g0 = [[ring(x) for x in row] for row in g0]
    g1 = [[ring(x) for x in row] for row in g1]
    g0i, g1i = mx.inverse(g0), mx.inverse(g1)
    A = mx.matmul(mx.matmul(g1i, M.A), mx.frobenius(g0, 1))
    B = mx.matmul(mx.matmul(g0i, M.B), mx.frobenius(g1, 1))
    Va = mx.matmul(mx.matmul(g1i, M.Va), mx.frobenius(g0, -1))
    Vb = mx.matmul(mx.matmul(g0i, M.Vb), mx.frobenius(g1, -1))
    gram = mx.matmul(mx.matmul(mx.transpose(g0), M.gram), g1)
    return DieudonneModule(M.params, A, B, Va, Vb, gram)


# ---------------------------------------------------------------------------
# text format

_HEADER_KEYS = ("ell", "a", "b", "r", "k", "N")


def format_module(M: DieudonneModule) -> str:
    p = M.params
    lines = [f"{key}={getattr(p, key)}" for key in _HEADER_KEYS]
    for name in ("A", "B"):
        lines.append(f"{name}:")
        for row in getattr(M, name):
            lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_module(text: str, allow_degenerate: bool = False) -> DieudonneModule:
    """Parse the module text format; errors carry 1-based line and column."""
    header: dict[str, int] = {}
    blocks: dict[str, list] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        m = re.fullmatch(r"(\w+)\s*=\s*(\S+)", stripped)
        if m:
            key, value = m.groups()
            if key not in _HEADER_KEYS:
                raise ModuleFormatError(f"unknown header key {key!r}", lineno, col)
            if blocks:
                raise ModuleFormatError("header line after matrix data", lineno, col)
            try:
                header[key] = int(value)
            except ValueError:
                raise ModuleFormatError(f"{key} must be an integer, got {value!r}", lineno,
                                        col + stripped.index(value)) from None
            continue
        m = re.fullmatch(r"(\w+)\s*:", stripped)
        if m:
            current = m.group(1)
            if current not in ("A", "B"):
                raise ModuleFormatError(f"unknown block {current!r}", lineno, col)
            if current in blocks:
                raise ModuleFormatError(f"duplicate block {current}", lineno, col)
            blocks[current] = []
            continue
        if current is None:
            raise ModuleFormatError("expected 'key=value' or a block header", lineno, col)
        row = []
        for tok in re.finditer(r"\S+", line):
            try:
                coeffs = [int(c) for c in tok.group().split(",")]
            except ValueError:
                raise ModuleFormatError(f"bad ring element {tok.group()!r}", lineno,
                                        tok.start() + 1) from None
            row.append((coeffs, lineno, tok.start() + 1))
        blocks[current].append((row, lineno, col))

    for key in ("ell", "a", "b"):
        if key not in header:
            raise ModuleFormatError(f"missing header {key}=", 1, 1)
    try:
        params = PelParams(header["ell"], header["a"], header["b"], header.get("r", 1),
                           header.get("k", 1), header.get("N"), allow_degenerate)
    except ValueError as exc:
        raise ModuleFormatError(str(exc), 1, 1) from None
    if "A" not in blocks:
        raise ModuleFormatError("missing block A:", len(text.splitlines()) or 1, 1)

    ring, n = params.ring, params.n

    def build(name):
        rows = blocks[name]
        if len(rows) != n:
            line = rows[-1][1] if rows else 1
            raise ModuleFormatError(f"block {name} has {len(rows)} rows, expected {n}", line, 1)
        out = []
        for row, lineno, col in rows:
            if len(row) != n:
                raise ModuleFormatError(f"row has {len(row)} entries, expected {n}", lineno, col)
            entries = []
            for coeffs, ln, c in row:
                if len(coeffs) != ring.m:
                    raise ModuleFormatError(
                        f"ring element needs {ring.m} coefficients, got {len(coeffs)}", ln, c)
                entries.append(ring(coeffs))
            out.append(entries)
        return out

    A = build("A")
    if "B" in blocks:
        return from_blocks(params, A, build("B"))
    try:
        return from_F_block(params, A)
    except ValueError as exc:
        raise ModuleFormatError(str(exc), blocks["A"][0][1] if blocks["A"] else 1, 1) from None
