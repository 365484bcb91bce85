"""Isometries of integer quadratic lattices: pseudo-reflections, spinorial norm, small searches."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import sympy

from .errors import DomainError
from .lattice import QuadLattice, diagonal_basis
from .linalg import bareiss_det, det
from .period import PeriodPoint
from .scalars import AlgebraicScalar, AlgebraicVector, sign_of

Matrix = tuple[tuple, ...]


def _as_matrix(A) -> Matrix:
    return tuple(tuple(row) for row in A)


def _is_int_matrix(A: Matrix) -> bool:
    return all(isinstance(x, int) for row in A for x in row)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, m = len(A), len(B[0])
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(len(B))), 0 * A[0][0])
                       for j in range(m)) for i in range(n))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def is_isometry(L: QuadLattice, A) -> bool:
    """Exact test of A^T G A = G."""
    A = _as_matrix(A)
    if len(A) != L.rank or any(len(row) != L.rank for row in A):
        raise DomainError("dimension", f"matrix size does not match rank {L.rank}")
    return matmul(matmul(transpose(A), L.gram), A) == L.gram


@dataclass(frozen=True, eq=False)
class Isometry:
    """A matrix acting on lattice coordinates (columns are images of basis vectors)."""

    lattice: QuadLattice
    matrix: Matrix

    def __post_init__(self):
        A = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", A)
        if not is_isometry(self.lattice, A):
            raise DomainError("not-isometry", "A^T G A != G")

    @classmethod
    def identity(cls, L: QuadLattice) -> "Isometry":
        return cls(L, identity_matrix(L.rank))

    @classmethod
    def minus_identity(cls, L: QuadLattice) -> "Isometry":
        return cls(L, tuple(tuple(-x for x in row) for row in identity_matrix(L.rank)))

    @cached_property
    def det(self):
        if _is_int_matrix(self.matrix):
            return bareiss_det(self.matrix)
        return det([[AlgebraicScalar.rational(x) if isinstance(x, int) else x for x in row]
                    for row in self.matrix])

    @cached_property
    def spin_norm(self) -> int:
        return spinorial_norm(self)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if other.lattice != self.lattice:
            raise DomainError("lattice-mismatch", "isometries of different lattices")
        return Isometry(self.lattice, matmul(self.matrix, other.matrix))

    def inverse(self) -> "Isometry":
        # A^{-1} = G^{-1} A^T G
        n = self.lattice.rank
        Ginv = sympy.Matrix(self.lattice.gram).inv()
        M = Ginv * sympy.Matrix(transpose(self.matrix)) * sympy.Matrix(self.lattice.gram)
        rows = [[Fraction(int(M[i, j].p), int(M[i, j].q)) for j in range(n)] for i in range(n)]
        return Isometry(self.lattice, tuple(tuple(int(x) if x.denominator == 1 else x for x in r)
                                            for r in rows))

    def apply(self, v: AlgebraicVector) -> AlgebraicVector:
        out = []
        for row in self.matrix:
            s = AlgebraicScalar.rational(0)
            for a, x in zip(row, v):
                if a and x:
                    s = s + x * a
            out.append(s)
        return AlgebraicVector(out)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.lattice == other.lattice and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.lattice, self.matrix))

    def to_json(self) -> dict:
        return {"lattice": self.lattice.to_json(), "matrix": [list(r) for r in self.matrix]}


def pseudo_reflection(L: QuadLattice, v) -> Isometry:
    """rho_v(x) = (-2 / q(v,v)) x + q(x, v) v for q(v, v) = +-2.

    For q(v,v) = -2 this is the reflection in v; for +2 it fixes v and
    negates v^perp.
    """
    v = tuple(int(x) for x in v)
    if len(v) != L.rank:
        raise DomainError("dimension", f"vector of length {len(v)} on rank {L.rank}")
    Gv = [sum(L.gram[i][j] * v[j] for j in range(L.rank)) for i in range(L.rank)]
    norm = sum(a * b for a, b in zip(v, Gv))
    if norm not in (2, -2):
        raise DomainError("norm", f"q(v, v) = {norm}, expected +-2")
    c = -2 // norm
    # column j is rho_v(e_j) = c e_j + (Gv)_j v
    A = tuple(tuple(c * (i == j) + Gv[j] * v[i] for j in range(L.rank)) for i in range(L.rank))
    rho = Isometry(L, A)
    assert matmul(A, A) == identity_matrix(L.rank), "rho_v is not an involution"
    return rho


def spinorial_norm(A: Isometry) -> int:
    """Sign of det of (projection to P0) o A on P0, P0 a fixed maximal positive subspace.

    P0 is spanned by the positive vectors of the cached diagonal basis; entries
    q(b_i, A b_j) differ from the projection matrix by positive row scalings.
    """
    L = A.lattice
    pos = [vec for vec, n in diagonal_basis(L.gram) if n > 0]
    if not pos:
        raise DomainError("signature", "spinorial norm needs a positive direction")
    if _is_int_matrix(A.matrix):
        G, n = L.gram, L.rank
        Gb = [[sum(G[k][i] * b[i] for i in range(n)) for k in range(n)] for b in pos]
        Ab = [[sum(A.matrix[k][i] * b[i] for i in range(n)) for k in range(n)] for b in pos]
        M = [[sum(x * y for x, y in zip(gb, ab)) for ab in Ab] for gb in Gb]
        d = bareiss_det(M)
        s = (d > 0) - (d < 0)
    else:
        images = [A.apply(AlgebraicVector(b)) for b in pos]
        M = [[L.q(AlgebraicVector(bi), Abj) for Abj in images] for bi in pos]
        s = sign_of(det(M))
    assert s != 0, "projection to the positive part is singular"
    return s


def is_plus(A: Isometry) -> bool:
    return spinorial_norm(A) == 1


@dataclass(frozen=True)
class ReflectionWord:
    """A product rho_{v_1} ... rho_{v_k} of pseudo-reflections."""

    lattice: QuadLattice
    factors: tuple = field(default=())

    def __post_init__(self):
        fs = tuple(tuple(int(x) for x in v) for v in self.factors)
        object.__setattr__(self, "factors", fs)
        for v in fs:
            if len(v) != self.lattice.rank:
                raise DomainError("dimension", "factor length does not match the lattice rank")
            n = self.lattice.q(AlgebraicVector(v), AlgebraicVector(v))
            if n not in (2, -2):
                raise DomainError("norm", f"factor {v} has norm {n}")


def apply_word(w: ReflectionWord) -> Isometry:
    out = Isometry.identity(w.lattice)
    for v in w.factors:
        out = out @ pseudo_reflection(w.lattice, v)
    return out


def ref_equals_oplus(n: int) -> bool:
    """Whether n - 1 is a prime power; n = 2 counts as true."""
    n = int(n)
    if n < 2:
        raise DomainError("invalid-parameter", "n must be >= 2")
    if n == 2:
        return True
    return len(sympy.factorint(n - 1)) == 1


def search_isometries(L: QuadLattice, height: int, rank_bound: int = 4,
                      threads: int = 1) -> list[Isometry]:
    """All integer isometries with entries in [-height, height].

    Columns are chosen one at a time among vectors of the right norm and the
    right products with earlier columns. Ordered lexicographically by columns.
    """
    n = L.rank
    if n > rank_bound:
        raise DomainError("rank-bound", f"rank {n} exceeds the search bound {rank_bound}")
    if int(height) < 1:
        raise DomainError("invalid-parameter", "height must be >= 1")
    G = L.gram
    rng = range(-height, height + 1)

    def gv(x):
        return tuple(sum(G[i][j] * x[j] for j in range(n)) for i in range(n))

    by_norm: dict[int, list] = {}
    for x in itertools.product(rng, repeat=n):
        if any(x):
            g = gv(x)
            by_norm.setdefault(sum(a * b for a, b in zip(x, g)), []).append((x, g))

    def extend(cols):
        j = len(cols)
        if j == n:
            return [cols]
        out = []
        for x, g in by_norm.get(G[j][j], []):
            if all(sum(a * b for a, b in zip(c, g)) == G[i][j] for i, c in enumerate(cols)):
                out.extend(extend(cols + [x]))
        return out

    first = [x for x, _ in by_norm.get(G[0][0], [])]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda x: extend([x]), first))
    else:
        parts = [extend([x]) for x in first]
    return [Isometry(L, transpose(cols)) for part in parts for cols in part]


def block_sum(A: Isometry, B: Isometry, lattice: QuadLattice) -> Isometry:
    """A + B block-diagonally on lattice = A.lattice + B.lattice."""
    n, m = A.lattice.rank, B.lattice.rank
    M = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        M[i][:n] = A.matrix[i]
    for i in range(m):
        M[n + i][n:] = B.matrix[i]
    return Isometry(lattice, M)


def act_on_period(A: Isometry, V: PeriodPoint) -> PeriodPoint:
    """<A v1, A v2>, oriented by the transported basis."""
    if A.lattice != V.lattice:
        raise DomainError("lattice-mismatch", "isometry and period point on different lattices")
    return PeriodPoint(V.lattice, (A.apply(V.u), A.apply(V.v)))
