"""Integer quadratic lattices carrying the BBF form, and the lattice catalog."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path

from .errors import DomainError
from .linalg import bareiss_det, diagonalize_gram
from .scalars import AlgebraicScalar, AlgebraicVector, dot, gram_apply, to_fraction

CATALOG_KEYS = ("U", "E8neg", "K3", "K3n", "Kummer", "rank1")


@dataclass(frozen=True)
class QuadLattice:
    """A non-degenerate symmetric integer Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        G = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", G)
        n = len(G)
        if any(len(row) != n for row in G):
            raise DomainError("dimension", "Gram matrix is not square")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(i)):
            raise DomainError("invalid-parameter", "Gram matrix is not symmetric")
        if bareiss_det(G) == 0:
            raise DomainError("degenerate", "Gram matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return bareiss_det(self.gram)

    @property
    def signature(self) -> tuple[int, int]:
        return signature(self)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def q(self, x: AlgebraicVector, y: AlgebraicVector) -> AlgebraicScalar:
        return gram_eval(self, x, y)

    def basis_vector(self, i: int) -> AlgebraicVector:
        return AlgebraicVector.basis(self.rank, i)

    def to_json(self) -> dict:
        out = {"gram": [list(r) for r in self.gram]}
        if self.name:
            out = {"name": self.name, **out}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "QuadLattice":
        return cls(tuple(tuple(r) for r in data["gram"]), data.get("name"))


@dataclass(frozen=True)
class FujikiData:
    """Fujiki constant c and quaternionic dimension n."""

    c: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "c", to_fraction(self.c))
        if int(self.n) < 1:
            raise DomainError("invalid-parameter", "n must be >= 1")


def gram_eval(L: QuadLattice, x: AlgebraicVector, y: AlgebraicVector) -> AlgebraicScalar:
    """q(x, y) = x^T G y, exactly."""
    if len(x) != L.rank or len(y) != L.rank:
        raise DomainError("dimension", f"vectors of length {len(x)}, {len(y)} on rank {L.rank}")
    gy = gram_apply(L.gram, y)
    if x.field.is_rational and gy.field.is_rational:
        total = sum((a.as_fraction() * b.as_fraction() for a, b in zip(x, gy) if a and b),
                    Fraction(0))
        return AlgebraicScalar.rational(total)
    return dot(x.entries, gy.entries)


@lru_cache(maxsize=256)
def _signature(gram: tuple) -> tuple[int, int]:
    diag = diagonalize_gram(gram)
    pos = sum(1 for _, n in diag if n > 0)
    return pos, len(diag) - pos


def signature(L: QuadLattice) -> tuple[int, int]:
    """Exact inertia (positive, negative) by symmetric elimination."""
    return _signature(L.gram)


@lru_cache(maxsize=256)
def diagonal_basis(gram: tuple) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Cached q-orthogonal integer basis with norms, positive vectors first in order found."""
    return tuple((tuple(v), n) for v, n in diagonalize_gram(gram))


def direct_sum(*lattices: QuadLattice, name: str | None = None) -> QuadLattice:
    n = sum(L.rank for L in lattices)
    G = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            G[off + i][off:off + L.rank] = row
        off += L.rank
    return QuadLattice(tuple(map(tuple, G)), name)


def diagonal(*entries: int, name: str | None = None) -> QuadLattice:
    n = len(entries)
    return QuadLattice(tuple(tuple(entries[i] if i == j else 0 for j in range(n))
                             for i in range(n)), name)


def _catalog_file(key: str) -> dict:
    override = os.environ.get("HK_CATALOG_DIR")
    if override:
        path = Path(override) / f"{key}.json"
        if path.exists():
            return json.loads(path.read_text())
    return json.loads(resources.files("hkperiod.catalog").joinpath(f"{key}.json").read_text())


def _check_entry(L: QuadLattice, expected: tuple[int, int]) -> QuadLattice:
    if not L.is_even:
        raise DomainError("invalid-parameter", f"catalog lattice {L.name} is not even")
    if L.signature != expected:
        raise DomainError("signature", f"catalog lattice {L.name} has signature "
                                       f"{L.signature}, expected {expected}")
    return L


def catalog_lookup(key: str, param: int | None = None) -> QuadLattice:
    """Named lattice from the catalog.

    K3n(n) is U^3 + E8(-1)^2 + <-2(n-1)> (second cohomology of K3^[n]),
    Kummer(n) is U^3 + <-2(n+1)>, rank1(k) is <k> for even nonzero k.
    """
    if key in ("U", "E8neg", "K3"):
        data = _catalog_file(key)
        L = QuadLattice(tuple(tuple(r) for r in data["gram"]), key)
        return _check_entry(L, {"U": (1, 1), "E8neg": (0, 8), "K3": (3, 19)}[key])
    if key in ("K3n", "Kummer"):
        if param is None or int(param) < 2:
            raise DomainError("invalid-parameter", f"{key} requires n >= 2")
        n = int(param)
        if key == "K3n":
            L = direct_sum(catalog_lookup("K3"), diagonal(-2 * (n - 1)), name=f"K3n[{n}]")
            return _check_entry(L, (3, 20))
        U = catalog_lookup("U")
        L = direct_sum(U, U, U, diagonal(-2 * (n + 1)), name=f"Kummer[{n}]")
        return _check_entry(L, (3, 4))
    if key == "rank1":
        if param is None or int(param) == 0 or int(param) % 2:
            raise DomainError("invalid-parameter", "rank1 requires an even nonzero parameter")
        k = int(param)
        return _check_entry(diagonal(k, name=f"rank1[{k}]"), (1, 0) if k > 0 else (0, 1))
    raise DomainError("unknown-key", f"no catalog entry {key!r}")


def fujiki_value(L: QuadLattice, eta: AlgebraicVector, f: FujikiData) -> AlgebraicScalar:
    """c * q(eta, eta)^n."""
    return gram_eval(L, eta, eta) ** f.n * f.c
