"""Exact arithmetic in multi-quadratic fields Q(sqrt(p1), ..., sqrt(pk)).

Elements are stored in the monomial basis {prod_{p in S} sqrt(p) : S subset of
the radicands}. Radicands are square-free, > 1 and multiplicatively independent
modulo squares, which makes the 2**k monomials linearly independent over Q; the
exact zero test is then "all coefficients vanish".

Real signs are decided by interval refinement of the radicals after the exact
zero test, so no floating-point heuristic ever enters an exact predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from sympy import factorint

from .errors import DomainError

EMPTY: frozenset = frozenset()


def to_fraction(x) -> Fraction:
    """Coerce int, Fraction or a "p/q" string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip().replace("−", "-"))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=4096)
def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (k, s) with n = k**2 * s and s square-free; n > 0."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    k, s = 1, 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return k, s


@lru_cache(maxsize=4096)
def _parity_mask(n: int, primes: tuple[int, ...]) -> int:
    """Bitmask of primes (indexed in `primes`) dividing n to an odd power."""
    mask = 0
    for p, e in factorint(n).items():
        if e % 2:
            mask |= 1 << primes.index(p)
    return mask


def _independent(radicands: Sequence[int]) -> bool:
    """True iff no non-empty sub-product of the radicands is a perfect square."""
    primes = tuple(sorted({p for r in radicands for p in factorint(r)}))
    rows = [_parity_mask(r, primes) for r in radicands]
    rank = 0
    for bit in range(len(primes)):
        pivot = next((i for i in range(rank, len(rows)) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] >> bit & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank == len(rows)


@dataclass(frozen=True)
class FieldSpec:
    """The field Q(sqrt(r) for r in radicands)."""

    radicands: tuple[int, ...] = ()

    def __post_init__(self):
        rads = tuple(int(r) for r in self.radicands)
        object.__setattr__(self, "radicands", rads)
        if list(rads) != sorted(set(rads)):
            raise ValueError("radicands must be distinct and sorted ascending")
        for r in rads:
            if r <= 1 or squarefree_decomposition(r)[0] != 1:
                raise ValueError(f"radicand {r} is not a square-free integer > 1")
        if not _independent(rads):
            raise ValueError(f"radicands {rads} are dependent modulo squares")

    @property
    def degree(self) -> int:
        return 1 << len(self.radicands)

    @property
    def is_rational(self) -> bool:
        return not self.radicands

    def monomials(self) -> list[frozenset]:
        rads = self.radicands
        return [frozenset(c) for k in range(len(rads) + 1) for c in combinations(rads, k)]

    @cached_property
    def _sqrt_table(self) -> dict[int, tuple[frozenset, int]]:
        # square-free s -> (S, k) with prod(S) = k**2 * s, i.e. sqrt(s) = monomial(S) / k
        table = {}
        for S in self.monomials():
            k, s = squarefree_decomposition(math.prod(S))
            table[s] = (S, k)
        return table

    def contains(self, other: "FieldSpec") -> bool:
        if set(other.radicands) <= set(self.radicands):
            return True
        return all(squarefree_decomposition(r)[1] in self._sqrt_table for r in other.radicands)

    def join(self, other: "FieldSpec") -> "FieldSpec":
        return _join(self, other)

    def extended(self, min_degree: int) -> "FieldSpec":
        """Adjoin the smallest primes not yet expressible until degree >= min_degree."""
        field = self
        p = 1
        while field.degree < min_degree:
            p += 1
            if factorint(p).get(p) != 1 or p in field._sqrt_table:
                continue
            field = field.join(FieldSpec((p,)))
        return field


QQ = FieldSpec()


@lru_cache(maxsize=1024)
def _join(a: FieldSpec, b: FieldSpec) -> FieldSpec:
    if a == b or a.contains(b):
        return a
    if b.contains(a):
        return b
    union = sorted(set(a.radicands) | set(b.radicands))
    if _independent(union):
        return FieldSpec(tuple(union))
    # keep the larger field's radicands and add only what is missing
    big, small = (a, b) if (a.degree, b.radicands) >= (b.degree, a.radicands) else (b, a)
    rads = list(big.radicands)
    for r in small.radicands:
        if _independent(rads + [r]):
            rads.append(r)
    return FieldSpec(tuple(sorted(rads)))


class AlgebraicScalar:
    """An exact element of a multi-quadratic field."""

    __slots__ = ("field", "_c")

    def __init__(self, field: FieldSpec = QQ, coeffs: Mapping | None = None):
        rads = set(field.radicands)
        c: dict[frozenset, Fraction] = {}
        for key, val in (coeffs or {}).items():
            key = _parse_key(key)
            if not key <= rads:
                raise ValueError(f"monomial {sorted(key)} not in field {field.radicands}")
            v = to_fraction(val)
            if v:
                c[key] = c.get(key, 0) + v
        self.field = field
        self._c = {k: v for k, v in c.items() if v}

    @classmethod
    def _raw(cls, field: FieldSpec, c: dict) -> "AlgebraicScalar":
        obj = object.__new__(cls)
        obj.field = field
        obj._c = c
        return obj

    @classmethod
    def rational(cls, x) -> "AlgebraicScalar":
        x = to_fraction(x)
        return cls._raw(QQ, {EMPTY: x} if x else {})

    @classmethod
    def sqrt_of(cls, n: int) -> "AlgebraicScalar":
        """The positive square root of a positive integer, adjoining what is needed."""
        k, s = squarefree_decomposition(n)
        if s == 1:
            return cls.rational(k)
        primes = tuple(sorted(factorint(s)))
        return cls._raw(FieldSpec(primes), {frozenset(primes): Fraction(k)})

    @property
    def coeffs(self) -> dict[frozenset, Fraction]:
        return dict(self._c)

    def is_rational(self) -> bool:
        return not self._c or (len(self._c) == 1 and EMPTY in self._c)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is irrational")
        return self._c.get(EMPTY, Fraction(0))

    def lift(self, field: FieldSpec) -> "AlgebraicScalar":
        """Re-express in a field that contains this scalar's field."""
        if field == self.field:
            return self
        if set(self.field.radicands) <= set(field.radicands):
            return AlgebraicScalar._raw(field, self._c)
        table = field._sqrt_table
        out: dict[frozenset, Fraction] = {}
        for S, v in self._c.items():
            j, m = squarefree_decomposition(math.prod(S))
            if m not in table:
                raise ValueError(f"field {field.radicands} does not contain sqrt({m})")
            T, k = table[m]
            out[T] = out.get(T, 0) + v * Fraction(j, k)
        return AlgebraicScalar._raw(field, {k: v for k, v in out.items() if v})

    # arithmetic -----------------------------------------------------------

    def _pair(self, other):
        if self.field == other.field:
            return self.field, self._c, other._c
        if not other._c or other.field.is_rational:
            return self.field, self._c, other._c
        if not self._c or self.field.is_rational:
            return other.field, self._c, other._c
        field = self.field.join(other.field)
        return field, self.lift(field)._c, other.lift(field)._c

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        field, a, b = self._pair(other)
        out = dict(a)
        for k, v in b.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return AlgebraicScalar._raw(field, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicScalar._raw(self.field, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, r) -> "AlgebraicScalar":
        r = to_fraction(r)
        if not r:
            return AlgebraicScalar._raw(self.field, {})
        return AlgebraicScalar._raw(self.field, {k: v * r for k, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self.scale(other.as_fraction())
        if self.is_rational():
            return other.scale(self.as_fraction())
        field, a, b = self._pair(other)
        # integer numerators over a common denominator; one gcd per output monomial
        da = math.lcm(*(x.denominator for x in a.values()))
        db = math.lcm(*(y.denominator for y in b.values()))
        na = [(S, x.numerator * (da // x.denominator)) for S, x in a.items()]
        nb = [(T, y.numerator * (db // y.denominator)) for T, y in b.items()]
        out: dict[frozenset, int] = {}
        for S, x in na:
            for T, y in nb:
                common = S & T
                v = x * y * math.prod(common) if common else x * y
                key = S ^ T
                out[key] = out.get(key, 0) + v
        den = da * db
        return AlgebraicScalar._raw(field, {k: Fraction(v, den) for k, v in out.items() if v})

    __rmul__ = __mul__

    def split(self, p: int) -> tuple["AlgebraicScalar", "AlgebraicScalar"]:
        """Write self = a + b*sqrt(p) with a, b free of the radicand p."""
        a, b = {}, {}
        for S, v in self._c.items():
            if p in S:
                b[S - {p}] = v
            else:
                a[S] = v
        return AlgebraicScalar._raw(self.field, a), AlgebraicScalar._raw(self.field, b)

    def inverse(self) -> "AlgebraicScalar":
        if not self._c:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return AlgebraicScalar._raw(self.field, {EMPTY: 1 / self._c[EMPTY]})
        p = max(r for S in self._c for r in S)
        a, b = self.split(p)
        # 1/(a + b sqrt p) = (a - b sqrt p) / (a^2 - p b^2), denominator free of p
        den = a * a - (b * b).scale(p)
        conj = a - b * AlgebraicScalar._raw(self.field, {frozenset((p,)): Fraction(1)})
        return conj * den.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = AlgebraicScalar.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return not (self - other)._c

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash(frozenset(self._c.items()))

    def __float__(self):
        return math.fsum(float(v) * _float_monomial(S) for S, v in self._c.items())

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for S in sorted(self._c, key=lambda s: (len(s), sorted(s))):
            v = fraction_str(self._c[S])
            rad = f"sqrt({'*'.join(map(str, sorted(S)))})"
            parts.append(v if not S else rad if v == "1" else f"-{rad}" if v == "-1" else f"{v}*{rad}")
        return " + ".join(parts)


def _parse_key(key) -> frozenset:
    if isinstance(key, frozenset):
        return key
    if isinstance(key, str):
        return frozenset(int(t) for t in key.split(",") if t.strip())
    return frozenset(int(t) for t in key)


@lru_cache(maxsize=4096)
def _float_monomial(S: frozenset) -> float:
    return math.prod(math.sqrt(p) for p in S)


def _coerce(x):
    if isinstance(x, AlgebraicScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicScalar.rational(x)
    return NotImplemented


def scalar(x) -> AlgebraicScalar:
    """Coerce int / Fraction / "p/q" / AlgebraicScalar to AlgebraicScalar."""
    if isinstance(x, AlgebraicScalar):
        return x
    return AlgebraicScalar.rational(to_fraction(x))


def sqrt(n: int) -> AlgebraicScalar:
    return AlgebraicScalar.sqrt_of(n)


# signs and approximation --------------------------------------------------

def _interval(x: AlgebraicScalar, prec: int) -> tuple[Fraction, Fraction]:
    roots = {}
    for S in x._c:
        for p in S:
            if p not in roots:
                r = math.isqrt(p << (2 * prec))
                roots[p] = (r, r + 1)
    lo = hi = Fraction(0)
    for S, c in x._c.items():
        den = 1 << (prec * len(S))
        m_lo = Fraction(math.prod(roots[p][0] for p in S), den)
        m_hi = Fraction(math.prod(roots[p][1] for p in S), den)
        if c > 0:
            lo += c * m_lo
            hi += c * m_hi
        else:
            lo += c * m_hi
            hi += c * m_lo
    return lo, hi


def sign_of(x) -> int:
    """Exact sign of the real embedding with all radicals positive."""
    x = scalar(x)
    if not x._c:
        return 0
    if x.is_rational():
        return 1 if x._c[EMPTY] > 0 else -1
    prec = 32
    while True:
        lo, hi = _interval(x, prec)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2


def approx_value(x, eps=Fraction(1, 10**9)) -> float:
    """A float within eps of the real value of x (eps > 0)."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = scalar(x)
    if x.is_rational():
        return float(x.as_fraction())
    prec = 32
    while True:
        lo, hi = _interval(x, prec)
        if hi - lo < eps:
            return float((lo + hi) / 2)
        prec *= 2


# square roots -------------------------------------------------------------

def _sqrt_times_rational(x: AlgebraicScalar) -> tuple[int, AlgebraicScalar] | None:
    """Find square-free m > 0 and y in x.field with x = m * y**2, or None.

    m = 1 whenever sqrt(x) already lies in x.field.
    """
    found = _sqrt_search(x)
    if found is None:
        return None
    m, y = found
    table = x.field._sqrt_table
    if m != 1 and m in table:
        T, k = table[m]
        y = y * AlgebraicScalar._raw(x.field, {T: Fraction(1, k)})
        m = 1
    return m, y


def _sqrt_search(x: AlgebraicScalar) -> tuple[int, AlgebraicScalar] | None:
    if not x._c:
        return 1, x
    if x.is_rational():
        v = x.as_fraction()
        if v < 0:
            return None
        kn, sn = squarefree_decomposition(v.numerator)
        kd, sd = squarefree_decomposition(v.denominator)
        m = sn * sd
        return m, AlgebraicScalar._raw(x.field, {EMPTY: Fraction(kn, kd * sd)})
    p = max(r for S in x._c for r in S)
    a, b = x.split(p)
    sqrt_p = AlgebraicScalar._raw(x.field, {frozenset((p,)): Fraction(1)})
    if not b:
        found = _sqrt_times_rational(a)
        if found is not None:
            return found
        found = _sqrt_times_rational(a.scale(Fraction(1, p)))
        if found is not None:
            # a = p m u^2 = m (u sqrt p)^2
            return found[0], found[1] * sqrt_p
        return None
    norm = a * a - (b * b).scale(p)
    root = _sqrt_times_rational(norm)
    if root is None or root[0] != 1:
        return None
    s = root[1]
    for t in ((a + s).scale(Fraction(1, 2)), (a - s).scale(Fraction(1, 2))):
        if not t:
            continue
        found = _sqrt_times_rational(t)
        if found is None:
            continue
        m, u = found
        v = b / (u.scale(2 * m))
        y = u + v * sqrt_p
        if (y * y).scale(m) == x:
            return m, y
    return None


def sqrt_scalar(x) -> AlgebraicScalar:
    """Positive square root of a positive scalar, enlarging the field if needed.

    Supported when x is a rational multiple of a square in its field; otherwise
    the root lies outside every multi-quadratic field reachable this way.
    """
    x = scalar(x)
    if sign_of(x) < 0:
        raise DomainError("positivity", "square root of a negative number")
    found = _sqrt_times_rational(x)
    if found is None:
        raise DomainError("not-representable", f"sqrt({x!r}) is not multi-quadratic")
    m, y = found
    root = sqrt(m) * y if m != 1 else y
    return -root if sign_of(root) < 0 else root


# vectors ------------------------------------------------------------------

class AlgebraicVector:
    """A vector with entries in one multi-quadratic field."""

    __slots__ = ("entries", "field")

    def __init__(self, entries: Iterable):
        items = [scalar(e) for e in entries]
        field = QQ
        for e in items:
            if e._c and e.field != field:
                field = field.join(e.field)
        self.field = field
        self.entries = tuple(e.lift(field) if e._c else AlgebraicScalar._raw(field, {})
                             for e in items)

    @classmethod
    def _raw(cls, field: FieldSpec, entries: tuple) -> "AlgebraicVector":
        obj = object.__new__(cls)
        obj.field = field
        obj.entries = entries
        return obj

    @classmethod
    def basis(cls, n: int, i: int) -> "AlgebraicVector":
        return cls([1 if j == i else 0 for j in range(n)])

    def lift(self, field: FieldSpec) -> "AlgebraicVector":
        if field == self.field:
            return self
        return AlgebraicVector._raw(field, tuple(e.lift(field) for e in self.entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def _pair(self, other: "AlgebraicVector"):
        if len(self) != len(other):
            raise DomainError("dimension", f"lengths {len(self)} and {len(other)} differ")
        if self.field == other.field:
            return self.field, self, other
        field = self.field.join(other.field)
        return field, self.lift(field), other.lift(field)

    def __add__(self, other):
        field, a, b = self._pair(other)
        return AlgebraicVector._raw(field, tuple(x + y for x, y in zip(a.entries, b.entries)))

    def __sub__(self, other):
        field, a, b = self._pair(other)
        return AlgebraicVector._raw(field, tuple(x - y for x, y in zip(a.entries, b.entries)))

    def __neg__(self):
        return AlgebraicVector._raw(self.field, tuple(-x for x in self.entries))

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return AlgebraicVector._raw(self.field, tuple(x.scale(c) for x in self.entries))
        c = scalar(c)
        if c.field == self.field or c.field.is_rational:
            return AlgebraicVector._raw(self.field, tuple(x * c for x in self.entries))
        return AlgebraicVector([x * c for x in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraicVector) or len(other) != len(self):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(tuple(self.entries))

    def __bool__(self):
        return any(self.entries)

    def is_rational(self) -> bool:
        return all(e.is_rational() for e in self.entries)

    def to_floats(self) -> list[float]:
        return [float(e) for e in self.entries]

    def primitive(self) -> "AlgebraicVector":
        """Positive rational rescaling with integer, coprime coefficients."""
        vals = [v for e in self.entries for v in e._c.values()]
        if not vals:
            return self
        den = math.lcm(*(v.denominator for v in vals))
        num = math.gcd(*(v.numerator for v in vals))
        return self * Fraction(den, num)

    def __repr__(self):
        return f"AlgebraicVector({list(self.entries)!r})"


def vector(*xs) -> AlgebraicVector:
    if len(xs) == 1 and not isinstance(xs[0], (int, Fraction, str, AlgebraicScalar)):
        xs = tuple(xs[0])
    return AlgebraicVector(xs)


def common_field(vectors: Iterable[AlgebraicVector]) -> FieldSpec:
    field = QQ
    for v in vectors:
        field = field.join(v.field)
    return field


def _numerators(x: AlgebraicScalar) -> tuple[int, list]:
    d = math.lcm(*(v.denominator for v in x._c.values()))
    return d, [(S, v.numerator * (d // v.denominator)) for S, v in x._c.items()]


def dot(xs: Iterable[AlgebraicScalar], ys: Iterable[AlgebraicScalar]) -> AlgebraicScalar:
    """sum x_i y_i, accumulated as integers over one common denominator."""
    pairs = [(x, y) for x, y in zip(xs, ys) if x._c and y._c]
    if not pairs:
        return AlgebraicScalar.rational(0)
    field = QQ
    for x, y in pairs:
        field = field.join(x.field).join(y.field)
    terms = []
    for x, y in pairs:
        da, na = _numerators(x.lift(field))
        db, nb = _numerators(y.lift(field))
        terms.append((da * db, na, nb))
    den = math.lcm(*(t[0] for t in terms))
    out: dict[frozenset, int] = {}
    for d, na, nb in terms:
        f = den // d
        for S, a in na:
            for T, b in nb:
                common = S & T
                v = a * b * f * math.prod(common) if common else a * b * f
                key = S ^ T
                out[key] = out.get(key, 0) + v
    return AlgebraicScalar._raw(field, {k: Fraction(v, den) for k, v in out.items() if v})


# rational kernels ---------------------------------------------------------

def _gram_of(gram) -> tuple[tuple[int, ...], ...]:
    return gram.gram if hasattr(gram, "gram") else tuple(tuple(r) for r in gram)


def gram_apply(gram, v: AlgebraicVector) -> AlgebraicVector:
    """G v for an integer Gram matrix G."""
    G = _gram_of(gram)
    if len(G) != len(v):
        raise DomainError("dimension", f"vector length {len(v)} != rank {len(G)}")
    out = []
    for row in G:
        acc: dict[frozenset, Fraction] = {}
        for g, e in zip(row, v.entries):
            if g:
                for k, c in e._c.items():
                    acc[k] = acc.get(k, 0) + g * c
        out.append(AlgebraicScalar._raw(v.field, {k: c for k, c in acc.items() if c}))
    return AlgebraicVector._raw(v.field, tuple(out))


def rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over Q or a multi-quadratic field.

    Returns (nonzero rows, pivot columns).
    """
    m = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_from_rref(reduced: list[list], pivots: list[int], ncols: int, zero, one) -> list[list]:
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def expand_constraints(constraints: Sequence[AlgebraicVector], gram) -> list[list[Fraction]]:
    """Rational equations equivalent to q(x, c) = 0 for all c, x rational."""
    G = _gram_of(gram)
    n = len(G)
    rows = []
    for c in constraints:
        if len(c) != n:
            raise DomainError("dimension", f"constraint length {len(c)} != rank {n}")
        gc = gram_apply(G, c)
        keys = sorted({k for e in gc.entries for k in e._c}, key=lambda s: (len(s), sorted(s)))
        for k in keys:
            rows.append([e._c.get(k, Fraction(0)) for e in gc.entries])
    return rows


def rational_kernel(constraints: Sequence[AlgebraicVector], gram) -> list[tuple[Fraction, ...]]:
    """Basis of {x in Q^b : q(x, c) = 0 for every constraint c}.

    Each field-valued equation splits into one rational equation per monomial.
    The basis is read off the reduced echelon form, so it depends only on the
    solution space and not on the order of the constraints.
    """
    n = len(_gram_of(gram))
    rows = expand_constraints(constraints, gram)
    reduced, pivots = rref(rows, n)
    basis = nullspace_from_rref(reduced, pivots, n, Fraction(0), Fraction(1))
    return [tuple(v) for v in basis]
