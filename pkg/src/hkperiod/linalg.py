"""Exact linear algebra over Z, Q and multi-quadratic fields."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError
from .scalars import (
    AlgebraicScalar,
    AlgebraicVector,
    common_field,
    nullspace_from_rref,
    rref,
    sign_of,
)


def _unify(vectors: Sequence[AlgebraicVector]) -> list[AlgebraicVector]:
    field = common_field(vectors)
    return [v.lift(field) for v in vectors]


def rank(vectors: Sequence[AlgebraicVector]) -> int:
    if not vectors:
        return 0
    vs = _unify(vectors)
    reduced, _ = rref([list(v.entries) for v in vs], len(vs[0]))
    return len(reduced)


def independent_subset(vectors: Sequence[AlgebraicVector]) -> list[int]:
    """Indices of a maximal independent prefix-greedy subset."""
    chosen: list[int] = []
    for i in range(len(vectors)):
        if rank([vectors[j] for j in chosen] + [vectors[i]]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def field_nullspace(rows: Sequence[Sequence[AlgebraicScalar]], ncols: int) -> list[AlgebraicVector]:
    """Basis of {x : rows . x = 0} over the field generated by the entries."""
    flat = [AlgebraicVector(r) for r in rows]
    vs = _unify(flat) if flat else []
    reduced, pivots = rref([list(v.entries) for v in vs], ncols)
    zero, one = AlgebraicScalar.rational(0), AlgebraicScalar.rational(1)
    return [AlgebraicVector(x) for x in nullspace_from_rref(reduced, pivots, ncols, zero, one)]


def coordinates(basis: Sequence[AlgebraicVector], v: AlgebraicVector) -> list[AlgebraicScalar] | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span.

    The basis must be linearly independent.
    """
    vs = _unify(list(basis) + [v])
    n = len(v)
    k = len(basis)
    # augmented system: columns are the basis vectors, last column is v
    rows = [[vs[j].entries[i] for j in range(k)] + [vs[k].entries[i]] for i in range(n)]
    reduced, pivots = rref(rows, k + 1)
    if k in pivots:
        return None
    coeffs = [AlgebraicScalar.rational(0)] * k
    for row, p in zip(reduced, pivots):
        coeffs[p] = row[k]
    return coeffs


def in_span(basis: Sequence[AlgebraicVector], v: AlgebraicVector) -> bool:
    return coordinates(basis, v) is not None


def det(m: Sequence[Sequence]):
    """Determinant; cofactor formulas up to 3x3, elimination beyond."""
    n = len(m)
    if n == 0:
        return AlgebraicScalar.rational(1)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    a = [list(r) for r in m]
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return a[0][0] * 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        result = result * a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def is_positive_definite(gram: Sequence[Sequence]) -> bool:
    """Sylvester's criterion with exact signs of the leading minors."""
    n = len(gram)
    for k in range(1, n + 1):
        if sign_of(det([row[:k] for row in gram[:k]])) <= 0:
            return False
    return True


def orthogonal_basis(vectors: Sequence[AlgebraicVector],
                     form: Callable) -> list[tuple[AlgebraicVector, AlgebraicScalar]]:
    """Fraction-free q-orthogonalisation of an independent family.

    Returns pairs (vector, q(vector, vector)) spanning the same space. Raises
    DomainError("degenerate") if the form is degenerate on the span.
    """
    vs = list(vectors)
    out = []
    while vs:
        idx = next((i for i, v in enumerate(vs) if form(v, v)), None)
        if idx is None:
            pair = next(((i, j) for i in range(len(vs)) for j in range(i + 1, len(vs))
                         if form(vs[i], vs[j])), None)
            if pair is None:
                raise DomainError("degenerate", "form vanishes on the remaining span")
            i, j = pair
            vs[i] = vs[i] + vs[j]
            idx = i
        p = vs.pop(idx)
        n = form(p, p)
        vs = [(v * n - p * form(v, p)).primitive() for v in vs]
        out.append((p, n))
    return out


# integer Gram matrices -----------------------------------------------------

def diagonalize_gram(G: Sequence[Sequence[int]]) -> list[tuple[list[int], int]]:
    """Integer vectors b_i with G(b_i, b_j) = 0 for i != j, plus their norms.

    Fraction-free symmetric elimination; each vector is kept primitive.
    """
    n = len(G)

    def pair(u, v):
        return sum(u[i] * G[i][j] * v[j] for i in range(n) if u[i] for j in range(n) if v[j])

    vs = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    norms = [G[i][i] for i in range(n)]
    out = []
    while vs:
        idx = next((i for i, nv in enumerate(norms) if nv), None)
        if idx is None:
            found = next(((i, j) for i in range(len(vs)) for j in range(i + 1, len(vs))
                          if pair(vs[i], vs[j])), None)
            if found is None:
                raise DomainError("degenerate", "Gram matrix is singular")
            i, j = found
            vs[i] = [a + b for a, b in zip(vs[i], vs[j])]
            norms[i] = pair(vs[i], vs[i])
            idx = i
        p = vs.pop(idx)
        pn = norms.pop(idx)
        gp = [sum(G[i][j] * p[j] for j in range(n)) for i in range(n)]
        new_vs, new_norms = [], []
        for v, nv in zip(vs, norms):
            c = sum(a * b for a, b in zip(v, gp))
            w = [pn * a - c * b for a, b in zip(v, p)]
            wn = pn * pn * nv - pn * c * c
            g = math.gcd(*w)
            if g > 1:
                w = [a // g for a in w]
                wn //= g * g
            new_vs.append(w)
            new_norms.append(wn)
        vs, norms = new_vs, new_norms
        out.append((p, pn))
    return out


def integer_kernel(C: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Z-basis of {x in Z^n : C x = 0} by unimodular column reduction."""
    A = [list(r) for r in C]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op(dst, src, q):
        for row in A:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]

    def swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    r = 0
    for row in A:
        if r == n:
            break
        for j in range(r + 1, n):
            while row[j]:
                if row[r] == 0:
                    swap(r, j)
                    continue
                col_op(j, r, row[j] // row[r])
                if row[j]:
                    swap(r, j)
        if row[r]:
            r += 1
    return [[U[i][j] for i in range(n)] for j in range(r, n)]


def hermite_rows(B: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form (canonical basis of the row lattice)."""
    A = [list(r) for r in B if any(r)]
    if not A:
        return []
    n = len(A[0])
    r = 0
    for c in range(n):
        if r == len(A):
            break
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(A[k][c]))
            A[r], A[i] = A[i], A[r]
            done = True
            for k in range(r + 1, len(A)):
                if A[k][c]:
                    q = A[k][c] // A[r][c]
                    A[k] = [a - q * b for a, b in zip(A[k], A[r])]
                    if A[k][c]:
                        done = False
            if done:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for k in range(r):
            q = A[k][c] // A[r][c]
            A[k] = [a - q * b for a, b in zip(A[k], A[r])]
        r += 1
    return [row for row in A[:r]]


def saturate(rational_basis: Sequence[Sequence[Fraction]], n: int) -> list[list[int]]:
    """Z-basis of (Q-span of the given vectors) intersected with Z^n, in HNF."""
    if not rational_basis:
        return []
    rows = [list(v) for v in rational_basis]
    reduced, pivots = rref(rows, n)
    # equations cutting out the span: a basis of its orthogonal complement
    comp = nullspace_from_rref(reduced, pivots, n, Fraction(0), Fraction(1))
    C = [_clear_denominators(c) for c in comp]
    return hermite_rows(integer_kernel(C, n))


def _clear_denominators(v: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    return [x // g for x in ints]
