"""Exact integer linear algebra.

Everything here works on plain Python ints, so there is no overflow and no
floating point. Matrices are tuples of row tuples; vectors are tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

IntVector = tuple
IntMatrix = tuple


class LinalgError(ValueError):
    """Raised for malformed or out-of-contract matrix input."""


def as_vector(v) -> IntVector:
    out = tuple(v)
    if not out:
        raise LinalgError("vector must have at least one entry")
    for x in out:
        if isinstance(x, bool) or not isinstance(x, int):
            raise LinalgError(f"non-integer entry {x!r}")
    return out


def as_matrix(rows, *, allow_empty: bool = False) -> IntMatrix:
    """Normalise nested sequences into a rectangular tuple-of-tuples matrix."""
    out = tuple(tuple(r) for r in rows)
    if not out:
        if allow_empty:
            return ()
        raise LinalgError("matrix must have at least one row")
    width = len(out[0])
    if width == 0:
        raise LinalgError("matrix must have at least one column")
    for r in out:
        if len(r) != width:
            raise LinalgError("ragged matrix")
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                raise LinalgError(f"non-integer entry {x!r}")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                 for row in A)


def transpose(A: IntMatrix) -> IntMatrix:
    return tuple(zip(*A))


def mat_vec(A: IntMatrix, v: Sequence[int]) -> IntVector:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


# -- determinants and rank -------------------------------------------------

def determinant(A) -> int:
    """Signed determinant by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in as_matrix(A)]
    n = len(M)
    if any(len(r) != n for r in M):
        raise LinalgError(f"determinant needs a square matrix, got {n}x{len(M[0])}")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A) -> int:
    """Rank over the rationals."""
    M = [[Fraction(x) for x in r] for r in as_matrix(A, allow_empty=True)]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def inverse_unimodular(A) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1."""
    A = as_matrix(A)
    n = len(A)
    if abs(determinant(A)) != 1:
        raise LinalgError("matrix is not unimodular")
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    out = []
    for row in M:
        entries = row[n:]
        assert all(x.denominator == 1 for x in entries)
        out.append(tuple(int(x) for x in entries))
    return tuple(out)


# -- Smith normal form -----------------------------------------------------

@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    ``V_inv`` is carried along because saturation and basis completion need
    the rows of ``V^-1``.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix
    rank: int

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]))))

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.diagonal if d != 0)


def smith_normal_form(A) -> SNFResult:
    """Smith normal form by row/column reduction with smallest-pivot choice."""
    A = as_matrix(A)
    m, n = len(A), len(A[0])
    D = [list(r) for r in A]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]
    Vi = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
            col_rest = [i for i in range(t + 1, m) if D[i][t]]
            row_rest = [j for j in range(t + 1, n) if D[t][j]]
            if col_rest or row_rest:
                # a remainder smaller than the pivot survived; promote it
                cands = [(abs(D[i][t]), i, t) for i in col_rest]
                cands += [(abs(D[t][j]), t, j) for j in row_rest]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    as_t = lambda M: tuple(tuple(r) for r in M)
    return SNFResult(as_t(U), as_t(D), as_t(V), as_t(Vi), t)


def invariant_factors(generators, ambient_rank: Optional[int] = None) -> tuple:
    """Cyclic decomposition of ``Z^m / span(generators)``.

    Returns ``m`` numbers ``d_1 | d_2 | ... | d_m``; a trailing ``0`` stands for
    a free ``Z`` summand. For a square full-rank generator set the product is
    ``|det|``.
    """
    G = as_matrix(generators, allow_empty=True)
    if not G:
        if ambient_rank is None:
            raise LinalgError("ambient_rank needed for an empty generator set")
        return (0,) * ambient_rank
    m = len(G[0])
    snf = smith_normal_form(G)
    diag = list(snf.invariant_factors)
    return tuple(diag + [0] * (m - len(diag)))


# -- vectors and lattices --------------------------------------------------

def primitive_vector(v) -> IntVector:
    """``v`` divided by the gcd of its entries."""
    v = as_vector(v)
    g = vector_gcd(v)
    if g == 0:
        raise LinalgError("zero vector has no primitive multiple")
    return tuple(x // g for x in v)


def hermite_normal_form(A) -> IntMatrix:
    """Row-style HNF of a full-row-rank matrix (canonical lattice basis)."""
    M = [list(r) for r in as_matrix(A)]
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if M[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(M[k][c]))
            M[r], M[i] = M[i], M[r]
            done = True
            for k in range(r + 1, rows):
                if M[k][c]:
                    q = M[k][c] // M[r][c]
                    M[k] = [a - q * b for a, b in zip(M[k], M[r])]
                    if M[k][c]:
                        done = False
            if done:
                break
        if r < rows and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-x for x in M[r]]
            for k in range(r):
                q = M[k][c] // M[r][c]
                if q:
                    M[k] = [a - q * b for a, b in zip(M[k], M[r])]
            r += 1
    return tuple(tuple(x) for x in M[:r])


def saturate_lattice(generators) -> IntMatrix:
    """Basis (in Hermite normal form) of ``(span_Q G) ∩ Z^n``.

    Rows of ``generators`` must be linearly independent.
    """
    G = as_matrix(generators)
    k = len(G)
    if rank(G) != k:
        raise LinalgError("generators are linearly dependent")
    snf = smith_normal_form(G)
    return hermite_normal_form(snf.V_inv[:k])


def is_saturated(basis) -> bool:
    """True when the rows span a saturated sublattice."""
    B = as_matrix(basis)
    if rank(B) != len(B):
        return False
    return all(d == 1 for d in smith_normal_form(B).invariant_factors)


@dataclass(frozen=True)
class QuotientMap:
    """Projection ``Z^n -> Z^(n-k)`` killing a saturated rank-``k`` sublattice.

    ``basis_choice`` is the unimodular basis (rows) used; the rows listed in
    ``complement_rows`` give the target coordinates, in order.
    """

    ambient_rank: int
    sublattice_basis: IntMatrix
    projection: IntMatrix
    basis_choice: IntMatrix
    complement_rows: tuple

    @property
    def target_rank(self) -> int:
        return self.ambient_rank - len(self.sublattice_basis)

    def __call__(self, v) -> IntVector:
        v = as_vector(v)
        if len(v) != self.ambient_rank:
            raise LinalgError(f"expected a vector of length {self.ambient_rank}")
        return mat_vec(self.projection, v)


def _default_complement(S: IntMatrix, n: int) -> IntMatrix:
    k = len(S)
    # prefer standard basis vectors, lexicographically first complement columns
    for comp in combinations(range(n), n - k):
        keep = [j for j in range(n) if j not in comp]
        if abs(determinant([[row[j] for j in keep] for row in S])) == 1:
            return tuple(tuple(int(i == c) for i in range(n)) for c in comp)
    return smith_normal_form(S).V_inv[k:]


def quotient_projection(saturated, basis_hint=None, *,
                        ambient_rank: Optional[int] = None) -> QuotientMap:
    """Build the projection onto ``Z^n / L`` for a saturated lattice ``L``.

    With ``basis_hint`` (a unimodular ``n x n`` matrix, rows a basis of
    ``Z^n`` containing a basis of ``L``) the target coordinates are the
    coefficients along the hint rows lying outside ``L``, in hint order.
    Without a hint the basis is ``L``'s basis followed by a deterministic
    complement.
    """
    S = as_matrix(saturated, allow_empty=True)
    if S:
        n = len(S[0])
        if ambient_rank is not None and ambient_rank != n:
            raise LinalgError("ambient_rank disagrees with the sublattice basis")
    elif ambient_rank is None:
        raise LinalgError("ambient_rank needed for the zero sublattice")
    else:
        n = ambient_rank
    k = len(S)
    if S and not is_saturated(S):
        raise LinalgError("sublattice basis is not saturated")

    if basis_hint is None:
        comp = _default_complement(S, n) if S else identity(n)
        basis = tuple(S) + tuple(comp)
        comp_idx = tuple(range(k, n))
    else:
        basis = as_matrix(basis_hint)
        if len(basis) != n or len(basis[0]) != n:
            raise LinalgError(f"basis_hint must be {n}x{n}")
        if abs(determinant(basis)) != 1:
            raise LinalgError("basis_hint is not unimodular")
        inside = [i for i, row in enumerate(basis)
                  if k and rank(tuple(S) + (row,)) == k]
        if len(inside) != k:
            raise LinalgError("basis_hint does not extend the sublattice basis")
        comp_idx = tuple(i for i in range(n) if i not in inside)

    inv = inverse_unimodular(basis)
    # x = c @ basis  =>  c = x @ inv, so coordinate c_j is column j of inv
    proj = tuple(tuple(inv[i][j] for i in range(n)) for j in comp_idx)
    return QuotientMap(n, S, proj, basis, comp_idx)
