"""Hyperkaehler lines (positive 3-planes), genericity, and the 4-line connectivity construction."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .chain import SubtwistorChain, validate_chain
from .errors import DomainError
from .lattice import QuadLattice
from .linalg import (
    coordinates,
    det,
    field_nullspace,
    in_span,
    is_positive_definite,
    orthogonal_basis,
    rank,
)
from .period import PeriodPoint, restricted_gram
from .scalars import (
    AlgebraicScalar,
    AlgebraicVector,
    FieldSpec,
    common_field,
    expand_constraints,
    rational_kernel,
    sign_of,
    sqrt_scalar,
)

DEFAULT_MAX_TRIES = 64


@dataclass(eq=False)
class HKLine:
    """A 3-plane W on which q is positive definite; its sphere S_W of oriented 2-planes.

    ``generic`` is a cached tri-state: None until decided by is_generic.
    """

    lattice: QuadLattice
    span: tuple
    generic: bool | None = None
    certificate: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        self.span = tuple(self.span)
        if len(self.span) != 3:
            raise DomainError("dimension", "a hyperkaehler line is spanned by three vectors")
        for w in self.span:
            if len(w) != self.lattice.rank:
                raise DomainError("dimension", "vector length does not match the lattice")
        self.check_positive()

    def check_positive(self):
        if not is_positive_definite(restricted_gram(self.lattice, self.span)):
            raise DomainError("positivity", "q is not positive definite on W")

    @property
    def field(self) -> FieldSpec:
        return common_field(self.span)

    def contains(self, v: AlgebraicVector) -> bool:
        return in_span(self.span, v)

    def contains_plane(self, V: PeriodPoint) -> bool:
        return all(self.contains(w) for w in V.span)


@dataclass(frozen=True, eq=False)
class TwistorTriple:
    """(Re Omega, Im Omega, omega): pairwise q-orthogonal with equal positive norms."""

    lattice: QuadLattice
    re_omega: AlgebraicVector
    im_omega: AlgebraicVector
    kahler: AlgebraicVector

    def __post_init__(self):
        L = self.lattice
        vs = (self.re_omega, self.im_omega, self.kahler)
        norms = [L.q(v, v) for v in vs]
        if not (norms[0] == norms[1] == norms[2]) or sign_of(norms[0]) <= 0:
            raise DomainError("norm", "triple norms are not equal and positive")
        if L.q(vs[0], vs[1]) or L.q(vs[0], vs[2]) or L.q(vs[1], vs[2]):
            raise DomainError("not-orthogonal", "triple is not pairwise orthogonal")


def first_success(attempt: Callable[[int], object], max_tries: int, threads: int = 1):
    """Lowest-index non-None result of attempt(0..max_tries-1); None if all fail.

    With threads > 1 candidates are evaluated in batches, but the reduction is
    by index, so the answer does not depend on the thread count.
    """
    if threads <= 1:
        for i in range(max_tries):
            out = attempt(i)
            if out is not None:
                return out
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, max_tries, threads):
            batch = list(pool.map(attempt, range(start, min(start + threads, max_tries))))
            for out in batch:
                if out is not None:
                    return out
    return None


def _rng(seed: int, tag: str, index: int) -> random.Random:
    # string seeds are hashed with SHA-512, independent of PYTHONHASHSEED
    return random.Random(f"{seed}/{tag}/{index}")


def random_field_element(field: FieldSpec, rng: random.Random, height: int) -> AlgebraicScalar:
    coeffs = {S: Fraction(rng.randint(-height, height)) for S in field.monomials()}
    if not any(coeffs.values()):
        coeffs[frozenset()] = Fraction(1)
    return AlgebraicScalar(field, coeffs)


# genericity -----------------------------------------------------------------

def genericity_certificate(lattice: QuadLattice, span: Sequence[AlgebraicVector]) -> dict:
    rows = expand_constraints(span, lattice)
    kernel = rational_kernel(span, lattice)
    cert = {
        "field": list(common_field(span).radicands),
        "equations": len(rows),
        "rank": lattice.rank - len(kernel),
        "kernel_dim": len(kernel),
    }
    if kernel:
        cert["witness"] = [str(x) for x in kernel[0]]
    return cert


def is_generic(W: HKLine) -> bool:
    """True iff W^perp contains no nonzero rational vector (decided exactly, cached)."""
    if W.generic is None:
        W.certificate = genericity_certificate(W.lattice, W.span)
        W.generic = W.certificate["kernel_dim"] == 0
    return W.generic


def is_generic_vector(lattice: QuadLattice, a: AlgebraicVector) -> bool:
    """a^perp has no nonzero rational point."""
    return not rational_kernel([a], lattice)


# incidence and positivity ------------------------------------------------------

def incident(Vx: PeriodPoint, Vy: PeriodPoint) -> HKLine | None:
    """The line through Vx and Vy if they meet in a line and span a positive 3-plane."""
    if Vx.lattice != Vy.lattice:
        raise DomainError("lattice-mismatch", "period points on different lattices")
    vecs = [*Vx.span, *Vy.span]
    r = rank(vecs)
    if r == 2:
        raise DomainError("coincident", "equal planes lie on infinitely many lines")
    if r != 3:
        return None
    third = Vy.u if rank([Vx.u, Vx.v, Vy.u]) == 3 else Vy.v
    span = (Vx.u, Vx.v, third)
    if not is_positive_definite(restricted_gram(Vx.lattice, span)):
        return None
    return HKLine(Vx.lattice, span)


def _positive_subspace(L: QuadLattice, vs: Sequence[AlgebraicVector]) -> bool:
    return bool(vs) and is_positive_definite(restricted_gram(L, vs))


def extend_positive(L: QuadLattice, W: Sequence[AlgebraicVector],
                    Wp: Sequence[AlgebraicVector]) -> AlgebraicVector:
    """A nonzero b in W such that <b> + Wp is positive.

    If W meets Wp, b is taken in the intersection; otherwise b is in W and Wp^perp.
    """
    W, Wp = list(W), list(Wp)
    if not _positive_subspace(L, W) or not _positive_subspace(L, Wp):
        raise DomainError("positivity", "both subspaces must be positive definite")
    if len(Wp) >= len(W):
        raise DomainError("dimension", "need dim Wp < dim W")
    if rank(W + Wp) < len(W) + len(Wp):
        # a W-combination equal to a Wp-combination
        rows = [[W[i][k] for i in range(len(W))] + [-Wp[j][k] for j in range(len(Wp))]
                for k in range(L.rank)]
        sol = field_nullspace(rows, len(W) + len(Wp))[0]
        b = _combine(sol.entries[:len(W)], W)
    else:
        rows = [[L.q(w, p) for w in W] for p in Wp]
        sol = field_nullspace(rows, len(W))[0]
        b = _combine(sol.entries, W)
    return b.primitive()


def _combine(coeffs, vectors) -> AlgebraicVector:
    out = None
    for c, v in zip(coeffs, vectors):
        if c:
            out = v * c if out is None else out + v * c
    if out is None:
        raise DomainError("zero-vector", "empty combination")
    return out


def orthogonal_in(L: QuadLattice, W: Sequence[AlgebraicVector],
                  constraints: Sequence[AlgebraicVector]) -> AlgebraicVector:
    """A nonzero vector of span(W) (3 vectors) q-orthogonal to 1 or 2 constraints.

    Division-free: 2x2 minors for one constraint, the cross product for two.
    """
    rows = [[L.q(c, w) for w in W] for c in constraints]
    rows = [r for r in rows if any(r)]
    if len(rows) == 2:
        a, b = rows
        k = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        if any(k):
            return _combine(k, W).primitive()
        rows = rows[:1]
    if not rows:
        return W[0]
    a = rows[0]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if a[i] or a[j]:
            k = [0, 0, 0]
            k[i], k[j] = a[j], -a[i]
            return _combine(k, W).primitive()
    raise AssertionError("unreachable")


# constructions ---------------------------------------------------------------

def generic_vector_in(W: HKLine, seed: int = 0, max_tries: int = DEFAULT_MAX_TRIES,
                      threads: int = 1) -> AlgebraicVector:
    """A vector a in W with a^perp free of rational points (certified exactly).

    Coefficients are drawn from a multi-quadratic field of degree >= rank,
    deterministically from the seed, with coefficient height widening over retries.
    """
    if not is_generic(W):
        raise DomainError("not-generic", "W^perp contains a rational vector; no such a exists")
    L = W.lattice
    field = W.field.extended(L.rank)

    def attempt(i):
        rng = _rng(seed, "generic-vector", i)
        height = 1 + i // 8
        coeffs = [random_field_element(field, rng, height) for _ in W.span]
        a = _combine(coeffs, W.span).primitive()
        return a if is_generic_vector(L, a) else None

    a = first_success(attempt, max_tries, threads)
    if a is None:
        raise DomainError("retry-exhausted", f"no certified generic vector in {max_tries} tries")
    return a


def hk_line_through(V: PeriodPoint, omega: AlgebraicVector) -> HKLine:
    """The line W = <V, omega> for omega in V^perp with q(omega, omega) > 0."""
    L = V.lattice
    if len(omega) != L.rank:
        raise DomainError("dimension", "omega has the wrong length")
    if L.q(omega, V.u) or L.q(omega, V.v):
        raise DomainError("not-orthogonal", "omega is not orthogonal to V")
    if sign_of(L.q(omega, omega)) <= 0:
        raise DomainError("positivity", "q(omega, omega) <= 0")
    return HKLine(L, (V.u, V.v, omega))


def generic_line_through(V: PeriodPoint, seed: int = 0, field: FieldSpec | None = None,
                         max_tries: int = DEFAULT_MAX_TRIES, threads: int = 1) -> HKLine:
    """A GHK line through V: omega = p + sum t_j n_j in V^perp with irrational t_j.

    p is the positive and n_j the negative vectors of a q-diagonal basis of V^perp;
    the t_j are halved until q(omega, omega) > 0.
    """
    L = V.lattice
    if L.signature[0] < 3:
        raise DomainError("signature", "need at least 3 positive directions")
    target = (field or FieldSpec()).join(common_field(V.span)).extended(max(L.rank - 2, 1))
    diag = orthogonal_basis(V.orthogonal_complement, L.q)
    positive = [w for w, n in diag if sign_of(n) > 0]
    others = [w for w, n in diag if sign_of(n) <= 0] + positive[1:]
    p = positive[0]

    def attempt(i):
        rng = _rng(seed, "omega", i)
        height = 1 + i // 8
        ts = [random_field_element(target, rng, height) for _ in others]
        tail = _combine(ts, others) if others else None
        for _ in range(64):
            omega = p if tail is None else p + tail
            if sign_of(L.q(omega, omega)) > 0:
                break
            tail = tail * Fraction(1, 2)
        else:
            return None
        W = HKLine(L, (V.u, V.v, omega.primitive()))
        return W if is_generic(W) else None

    W = first_success(attempt, max_tries, threads)
    if W is None:
        raise DomainError("retry-exhausted", f"no generic line through V in {max_tries} tries")
    return W


def _g_form(g):
    """Exact bilinear form from an auxiliary metric (None = identity)."""
    if g is None:
        return lambda x, y: sum((a * b for a, b in zip(x, y) if a and b),
                                AlgebraicScalar.rational(0))
    gram = [[Fraction(float(v)) for v in row] for row in getattr(g, "gram", g)]

    def form(x, y):
        total = AlgebraicScalar.rational(0)
        for i, a in enumerate(x):
            if not a:
                continue
            row = sum((b * gram[i][j] for j, b in enumerate(y) if b and gram[i][j]),
                      AlgebraicScalar.rational(0))
            total = total + a * row
        return total

    return form


def sphere_point(W: HKLine, n: AlgebraicVector, g=None) -> PeriodPoint:
    """The oriented plane of W that is g-orthogonal to n, with (u, v, n) positive in W.

    n need not be normalised: only its direction matters.
    """
    if not any(n):
        raise DomainError("zero-vector", "direction is zero")
    cn = coordinates(W.span, n)
    if cn is None:
        raise DomainError("membership", "direction is not in W")
    form = _g_form(g)
    nn = form(n, n)
    projections = [(w * nn - n * form(w, n)) for w in W.span]
    u = next(p for p in projections if any(p))
    v = next(p for p in projections if rank([u, p]) == 2)
    u, v = u.primitive(), v.primitive()
    cu, cv = coordinates(W.span, u), coordinates(W.span, v)
    if sign_of(det([cu, cv, cn])) < 0:
        v = -v
    return PeriodPoint(W.lattice, (u, v))


def normalize_triple(l, omega: AlgebraicVector) -> TwistorTriple:
    """Rescale omega so that q(Re, Re) = q(Im, Im) = q(omega, omega)."""
    L = l.lattice
    if L.q(omega, l.re) or L.q(omega, l.im):
        raise DomainError("not-orthogonal", "omega is not orthogonal to <Re l, Im l>")
    qo = L.q(omega, omega)
    if sign_of(qo) <= 0:
        raise DomainError("positivity", "q(omega, omega) <= 0")
    t = sqrt_scalar(L.q(l.re, l.re) / qo)
    return TwistorTriple(L, l.re, l.im, omega * t)


# connectivity ----------------------------------------------------------------

@dataclass
class Construction:
    """The free choices of a 4-line chain between Vx and Vy."""

    Vx: PeriodPoint
    Vy: PeriodPoint
    Wx: HKLine
    Wy: HKLine
    a: AlgebraicVector
    b: AlgebraicVector
    z: AlgebraicVector
    u: AlgebraicVector
    flips: tuple = (False, False, False)

    def planes(self):
        a, b, z, u = self.a, self.b, self.z, self.u
        s = [(a, z), (a, b), (b, u)]
        return [(q, p) if f else (p, q) for (p, q), f in zip(s, self.flips)]

    def assemble(self) -> SubtwistorChain:
        L = self.Vx.lattice
        a, b, z, u = self.a, self.b, self.z, self.u
        bridge1 = HKLine(L, (z, a, b), generic=None)
        bridge2 = HKLine(L, (a, b, u), generic=None)
        junctions = tuple(PeriodPoint(L, s) for s in self.planes())
        return SubtwistorChain(L, (self.Wx, bridge1, bridge2, self.Wy), junctions,
                               (self.Vx, self.Vy))


def build_construction(Vx: PeriodPoint, Vy: PeriodPoint, seed: int = 0,
                       threads: int = 1, max_tries: int = DEFAULT_MAX_TRIES) -> Construction:
    """Generic lines Wx through Vx and Wy through Vy, and bridge vectors a, b, z, u.

    a in Wx is generic, b in Wy is orthogonal to a, and z in Wx, u in Wy are
    orthogonal to <a, b>. Both bridges <z, a, b> and <a, b, u> contain a, hence
    are generic, and share the positive plane <a, b>.
    """
    L = Vx.lattice
    field = common_field([*Vx.span, *Vy.span]).extended(L.rank)
    Wx = generic_line_through(Vx, seed, field, max_tries, threads)
    Wy = generic_line_through(Vy, seed + 1, field, max_tries, threads)
    a = generic_vector_in(Wx, seed, max_tries, threads)
    b = orthogonal_in(L, Wy.span, [a])
    z = orthogonal_in(L, Wx.span, [a, b])
    u = orthogonal_in(L, Wy.span, [a, b])
    return Construction(Vx, Vy, Wx, Wy, a, b, z, u)


def connect_chain(Vx: PeriodPoint, Vy: PeriodPoint, seed: int = 0, threads: int = 1,
                  max_tries: int = DEFAULT_MAX_TRIES, validate: bool = True) -> SubtwistorChain:
    """At most 4 sequentially intersecting GHK lines from Vx to Vy."""
    L = Vx.lattice
    if Vy.lattice != L:
        raise DomainError("lattice-mismatch", "period points on different lattices")
    if L.signature[0] != 3 or L.signature[1] < 1:
        raise DomainError("signature", "connectivity needs signature (3, k) with k >= 1")
    relation = Vx.relation(Vy)
    if relation == 1:
        return SubtwistorChain(L, (), (), (Vx, Vy))
    if relation == -1:
        W = generic_line_through(Vx, seed, None, max_tries, threads)
        chain = SubtwistorChain(L, (W,), (), (Vx, Vy))
    else:
        W = incident(Vx, Vy)
        if W is not None and is_generic(W):
            chain = SubtwistorChain(L, (W,), (), (Vx, Vy))
        else:
            chain = build_construction(Vx, Vy, seed, threads, max_tries).assemble()
    if validate:
        report = validate_chain(chain)
        if not report:
            raise DomainError("invalid-chain", f"{report.clause}: {report.detail}")
    return chain
