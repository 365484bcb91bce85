"""Period points: isotropic lines l with q(l, conj l) > 0, and oriented positive 2-planes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError
from .lattice import QuadLattice
from .linalg import coordinates, det, field_nullspace, is_positive_definite, orthogonal_basis, saturate
from .scalars import AlgebraicVector, gram_apply, rational_kernel, sign_of, sqrt_scalar


class Component(str, enum.Enum):
    PLUS = "PLUS"
    MINUS = "MINUS"


def restricted_gram(L: QuadLattice, vectors) -> list[list]:
    vectors = list(vectors)
    n = len(vectors)
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = L.q(vectors[i], vectors[j])
    return M


def _check_length(L: QuadLattice, *vectors):
    for v in vectors:
        if len(v) != L.rank:
            raise DomainError("dimension", f"vector of length {len(v)} on a rank {L.rank} lattice")


@dataclass(frozen=True, eq=False)
class PeriodPoint:
    """An oriented 2-plane V = <u, v> on which q is positive definite.

    The orientation is the order of the basis. Equality compares oriented planes.
    """

    lattice: QuadLattice
    span: tuple[AlgebraicVector, AlgebraicVector]

    def __post_init__(self):
        span = tuple(self.span)
        if len(span) != 2:
            raise DomainError("dimension", "a period point is spanned by two vectors")
        object.__setattr__(self, "span", span)
        _check_length(self.lattice, *span)
        if not any(span[0]) or not any(span[1]):
            raise DomainError("zero-vector", "period plane basis contains a zero vector")
        # a positive-definite Gram also certifies independence
        if not is_positive_definite(restricted_gram(self.lattice, span)):
            raise DomainError("positivity", "q is not positive definite on the plane")

    @property
    def u(self) -> AlgebraicVector:
        return self.span[0]

    @property
    def v(self) -> AlgebraicVector:
        return self.span[1]

    def reversed(self) -> "PeriodPoint":
        return PeriodPoint(self.lattice, (self.v, self.u))

    def relation(self, other: "PeriodPoint") -> int:
        """+1 for the same oriented plane, -1 for reversed orientation, 0 otherwise."""
        if other.lattice != self.lattice:
            raise DomainError("lattice-mismatch", "period points on different lattices")
        cu = coordinates(self.span, other.u)
        cv = coordinates(self.span, other.v) if cu is not None else None
        if cu is None or cv is None:
            return 0
        return sign_of(cu[0] * cv[1] - cu[1] * cv[0])

    def __eq__(self, other):
        if not isinstance(other, PeriodPoint):
            return NotImplemented
        return other.lattice == self.lattice and self.relation(other) == 1

    __hash__ = None

    @cached_property
    def orthogonal_complement(self) -> list[AlgebraicVector]:
        """Basis of V^perp (over the field of the span)."""
        rows = [list(gram_apply(self.lattice, w).entries) for w in self.span]
        return field_nullspace(rows, self.lattice.rank)

    @cached_property
    def reference_positive(self) -> AlgebraicVector:
        """First positive vector of a q-diagonal basis of V^perp.

        Fixes which half of the positive (1,1)-cone is labelled PLUS; together
        with the basis order of V this is the stored spin-orientation datum.
        """
        if self.lattice.signature[0] != 3:
            raise DomainError("signature", "two cone components need 3 positive directions")
        for w, n in orthogonal_basis(self.orthogonal_complement, self.lattice.q):
            if sign_of(n) > 0:
                return w
        raise DomainError("signature", "no positive direction orthogonal to the plane")

    @property
    def spin_orientation(self) -> tuple[tuple[AlgebraicVector, AlgebraicVector], AlgebraicVector]:
        return self.span, self.reference_positive

    def to_floats(self):
        return [self.u.to_floats(), self.v.to_floats()]


@dataclass(frozen=True, eq=False)
class LineRep:
    """Real and imaginary parts of a representative of an isotropic line l."""

    lattice: QuadLattice
    re: AlgebraicVector
    im: AlgebraicVector

    def conjugate(self) -> "LineRep":
        return LineRep(self.lattice, self.re, -self.im)

    def same_point(self, other: "LineRep") -> bool:
        """Equality in projective space (up to a nonzero complex scalar)."""
        return line_to_plane(self) == line_to_plane(other)


def validate_line(L: QuadLattice, re: AlgebraicVector, im: AlgebraicVector) -> LineRep:
    """Check q(l, l) = 0 and q(l, conj l) > 0 for l = re + i im."""
    _check_length(L, re, im)
    if not any(re) and not any(im):
        raise DomainError("zero-vector", "l = 0")
    qrr, qii, qri = L.q(re, re), L.q(im, im), L.q(re, im)
    # q(l, l) = q(re,re) - q(im,im) + 2i q(re,im)
    if qrr != qii or qri:
        raise DomainError("isotropy", "q(l, l) != 0")
    # q(l, conj l) = q(re,re) + q(im,im) = 2 q(re,re)
    if sign_of(qrr) <= 0:
        raise DomainError("positivity", "q(l, conj l) <= 0")
    return LineRep(L, re, im)


def line_to_plane(l: LineRep) -> PeriodPoint:
    return PeriodPoint(l.lattice, (l.re, l.im))


def plane_to_line(V: PeriodPoint) -> LineRep:
    """Representative re + i im with re = first basis vector, im q-orthogonal of equal norm.

    im is a positive multiple of the q-projection of the second basis vector,
    so the orientation of V is kept. Needs sqrt(det) of the restricted Gram,
    which may enlarge the field.
    """
    L = V.lattice
    u, v = V.span
    quu, quv = L.q(u, u), L.q(u, v)
    w = v * quu - u * quv
    d = det(restricted_gram(L, V.span))
    # q(w, w) = q(u,u) * det, so im = w / sqrt(det) has q(im, im) = q(u, u)
    im = w * (1 / sqrt_scalar(d))
    return validate_line(L, u, im)


def ns_rank(V: PeriodPoint) -> tuple[int, list[list[int]]]:
    """Rank and Z-basis (Hermite form) of V^perp intersected with the integer lattice."""
    kernel = rational_kernel(V.span, V.lattice)
    basis = saturate(kernel, V.lattice.rank)
    return len(basis), basis


def cone_component(V: PeriodPoint, nu: AlgebraicVector) -> Component:
    """Which half of {x in V^perp : q(x,x) > 0} contains nu."""
    L = V.lattice
    _check_length(L, nu)
    if any(L.q(nu, w) for w in V.span):
        raise DomainError("not-orthogonal", "nu is not of type (1,1)")
    if sign_of(L.q(nu, nu)) <= 0:
        raise DomainError("positivity", "q(nu, nu) <= 0")
    return Component.PLUS if sign_of(L.q(nu, V.reference_positive)) > 0 else Component.MINUS
