"""Dense matrices over a ``WittRing``: products, inverses, Smith form, char poly.

Matrices are lists of rows of ``RingElement``.  Rank, kernel and determinant
helpers at the bottom assume a residue field (N == 1) and do plain Gaussian
elimination.
"""
from __future__ import annotations

from typing import Sequence

from .arith import RingElement, WittRing

Matrix = list[list[RingElement]]
Vector = list[RingElement]


def zeros(ring: WittRing, rows: int, cols: int) -> Matrix:
    z = ring.zero
    return [[z] * cols for _ in range(rows)]


def identity(ring: WittRing, n: int) -> Matrix:
    z, o = ring.zero, ring.one
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def diagonal(ring: WittRing, entries: Sequence) -> Matrix:
    M = zeros(ring, len(entries), len(entries))
    for i, e in enumerate(entries):
        M[i][i] = ring(e)
    return M


def shape(M: Matrix) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def copy(M: Matrix) -> Matrix:
    return [list(row) for row in M]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)]


def matmul(X: Matrix, Y: Matrix) -> Matrix:
    if X and Y and len(X[0]) != len(Y):
        raise ValueError(f"shape mismatch {shape(X)} x {shape(Y)}")
    if not X:
        return []
    if not Y or not Y[0]:
        return [[] for _ in X]
    ring = Y[0][0].ring
    mul, add = ring._mul, ring._add
    zero = (0,) * ring.m
    cols = [[Y[t][j].c for t in range(len(Y))] for j in range(len(Y[0]))]
    out = []
    for row in X:
        rc = [x.c for x in row]
        new = []
        for col in cols:
            acc = zero
            for a, b in zip(rc, col):
                if any(a) and any(b):
                    acc = add(acc, mul(a, b))
            new.append(RingElement(ring, acc))
        out.append(new)
    return out


def matvec(X: Matrix, v: Vector) -> Vector:
    return [row[0] for row in matmul(X, [[x] for x in v])] if X else []


def add(X: Matrix, Y: Matrix) -> Matrix:
    return [[a + b for a, b in zip(r, s)] for r, s in zip(X, Y)]


def scale(c, X: Matrix) -> Matrix:
    return [[c * a for a in row] for row in X]


def frobenius(X: Matrix, e: int) -> Matrix:
    """Entrywise sigma^e."""
    if not X or not X[0] or e % X[0][0].ring.m == 0:
        return copy(X)
    return [[a.frobenius(e) for a in row] for row in X]


def reduce(X: Matrix, N: int = 1) -> Matrix:
    if X and X[0] and X[0][0].ring.N == N:
        return copy(X)
    return [[a.reduce(N) for a in row] for row in X]


def lift(X: Matrix, N: int) -> Matrix:
    return [[a.lift(N) for a in row] for row in X]


def is_zero(X: Matrix) -> bool:
    return not any(a for row in X for a in row)


def block(rows: Sequence[Sequence[Matrix]]) -> Matrix:
    out = []
    for brow in rows:
        for i in range(len(brow[0])):
            out.append([a for blk in brow for a in blk[i]])
    return out


def submatrix(X: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[X[i][j] for j in cols] for i in rows]


# ---------------------------------------------------------------------------
# Over W_N


def inverse(X: Matrix) -> Matrix:
    """Inverse over W_N; raises ValueError unless det X is a unit."""
    n = len(X)
    ring = X[0][0].ring
    A = copy(X)
    I = identity(ring, n)
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col].is_unit()), None)
        if piv is None:
            raise ValueError("matrix is not invertible over the ring")
        A[col], A[piv] = A[piv], A[col]
        I[col], I[piv] = I[piv], I[col]
        inv = A[col][col].inverse()
        A[col] = [a * inv for a in A[col]]
        I[col] = [a * inv for a in I[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
                I[i] = [a - f * b for a, b in zip(I[i], I[col])]
    return I


def smith(X: Matrix) -> tuple[Matrix, list[int], Matrix]:
    """Smith form over the chain ring W_N.

    Returns (P, vals, Q) with P, Q invertible and P X Q = diag(l^vals), vals
    non-decreasing; a zero diagonal entry is reported as valuation N.
    """
    n, k = shape(X)
    ring = X[0][0].ring
    A = copy(X)
    P = identity(ring, n)
    Q = identity(ring, k)
    vals = []
    for t in range(min(n, k)):
        best, bi, bj = ring.N, None, None
        for i in range(t, n):
            for j in range(t, k):
                v = A[i][j].valuation()
                if v < best:
                    best, bi, bj = v, i, j
                    if v == 0:
                        break
            if best == 0:
                break
        if bi is None:
            vals.extend([ring.N] * (min(n, k) - t))
            break
        A[t], A[bi] = A[bi], A[t]
        P[t], P[bi] = P[bi], P[t]
        for row in A:
            row[t], row[bj] = row[bj], row[t]
        for row in Q:
            row[t], row[bj] = row[bj], row[t]
        # pivot = l^v * u; scale the row by u^-1 so the pivot is exactly l^v
        u_inv = A[t][t].divide_by_ell_power(best).inverse()
        A[t] = [a * u_inv for a in A[t]]
        P[t] = [a * u_inv for a in P[t]]
        for i in range(t + 1, n):
            if A[i][t]:
                f = A[i][t].divide_by_ell_power(best)
                A[i] = [a - f * b for a, b in zip(A[i], A[t])]
                P[i] = [a - f * b for a, b in zip(P[i], P[t])]
        for j in range(t + 1, k):
            if A[t][j]:
                f = A[t][j].divide_by_ell_power(best)
                for row in A:
                    row[j] = row[j] - f * row[t]
                for row in Q:
                    row[j] = row[j] - f * row[t]
        vals.append(best)
    return P, vals, Q


def elementary_divisor_valuations(X: Matrix) -> list[int]:
    return smith(X)[1]


def charpoly(X: Matrix) -> list[RingElement]:
    """Coefficients c_0..c_n of det(T - X), low to high (Berkowitz, division-free)."""
    n = len(X)
    if n == 0:
        return []
    ring = X[0][0].ring
    one = ring.one
    vect = [one, -X[0][0]]  # high -> low
    for r in range(1, n):
        M = [row[:r] for row in X[:r]]
        R = X[r][:r]
        C = [X[i][r] for i in range(r)]
        t = [one, -X[r][r]]
        v = C
        for _ in range(r):
            t.append(-sum((a * b for a, b in zip(R, v)), ring.zero))
            v = matvec(M, v)
        new = []
        for i in range(r + 2):
            acc = ring.zero
            for j in range(max(0, i - len(t) + 1), min(i, r) + 1):
                acc = acc + t[i - j] * vect[j]
            new.append(acc)
        vect = new
    return list(reversed(vect))


# ---------------------------------------------------------------------------
# Over the residue field (N == 1)


def _require_field(X: Matrix) -> None:
    if X and X[0] and X[0][0].ring.N != 1:
        raise ValueError("field operation on a ring with N > 1; reduce first")


def rref(X: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns, over the residue field."""
    _require_field(X)
    A = copy(X)
    n, k = shape(A)
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col].inverse()
        A[r] = [a * inv for a in A[r]]
        for i in range(n):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return A, pivots


def rank(X: Matrix) -> int:
    if not X or not X[0]:
        return 0
    return len(rref(X)[1])


def kernel_with_free(X: Matrix) -> tuple[list[Vector], list[int]]:
    """Kernel basis plus its free columns.

    Basis vector i has a 1 at free[i] and 0 at the other free columns, so the
    coordinates of any kernel vector w are just [w[f] for f in free].
    """
    n, k = shape(X)
    if k == 0:
        return [], []
    if n == 0:
        raise ValueError("need at least one row to infer the ring")
    ring = X[0][0].ring
    R, pivots = rref(X)
    free = [j for j in range(k) if j not in pivots]
    basis = []
    for f in free:
        v = [ring.zero] * k
        v[f] = ring.one
        for row, p in enumerate(pivots):
            v[p] = -R[row][f]
        basis.append(v)
    return basis, free


def kernel(X: Matrix) -> list[Vector]:
    """Basis of {v : X v = 0}, one vector per free column of the RREF."""
    return kernel_with_free(X)[0]


def column_space(X: Matrix) -> list[Vector]:
    """Canonical basis (RREF rows of the transpose) of the column span."""
    if not X or not X[0]:
        return []
    R, pivots = rref(transpose(X))
    return [R[i] for i in range(len(pivots))]


def span_basis(vectors: Sequence[Vector]) -> list[Vector]:
    """Canonical (RREF) basis of the span of the given vectors."""
    if not vectors:
        return []
    R, pivots = rref([list(v) for v in vectors])
    return [R[i] for i in range(len(pivots))]


def det(X: Matrix) -> RingElement:
    """Determinant over the residue field."""
    _require_field(X)
    n = len(X)
    if n == 0:
        raise ValueError("empty matrix; use the ring's one")
    ring = X[0][0].ring
    A = copy(X)
    d = ring.one
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            return ring.zero
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            d = -d
        d = d * A[col][col]
        inv = A[col][col].inverse()
        for i in range(col + 1, n):
            if A[i][col]:
                f = A[i][col] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return d


def solve(basis: Sequence[Vector], v: Vector) -> Vector:
    """Coordinates c with sum c_i basis_i == v; ValueError if v is not in the span."""
    ring = v[0].ring
    if not basis:
        if any(v):
            raise ValueError("vector not in span")
        return []
    cols = [list(b) for b in basis]
    aug = [[cols[j][i] for j in range(len(cols))] + [v[i]] for i in range(len(v))]
    R, pivots = rref(aug)
    if len(cols) in pivots:
        raise ValueError("vector not in span")
    if len(pivots) < len(cols):
        raise ValueError("basis vectors are linearly dependent")
    coords = [ring.zero] * len(cols)
    for row, p in enumerate(pivots):
        coords[p] = R[row][-1]
    return coords
