"""JSON encodings of exact scalars, vectors, lattices, period points, lines and chains."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .chain import SubtwistorChain
from .errors import DomainError
from .ghk import HKLine, genericity_certificate
from .lattice import QuadLattice, catalog_lookup
from .ortho import Isometry
from .period import LineRep, PeriodPoint, validate_line
from .scalars import AlgebraicScalar, AlgebraicVector, FieldSpec, fraction_str, to_fraction


def scalar_to_json(x: AlgebraicScalar):
    """"p/q" for rationals, otherwise {"radicands": [...], "coeffs": {"2,3": "p/q", ...}}."""
    if x.field.is_rational:
        return fraction_str(x.as_fraction())
    keys = sorted(x.coeffs, key=lambda S: (len(S), sorted(S)))
    return {"radicands": list(x.field.radicands),
            "coeffs": {",".join(map(str, sorted(S))): fraction_str(x.coeffs[S]) for S in keys}}


def scalar_from_json(obj) -> AlgebraicScalar:
    if isinstance(obj, dict):
        field = FieldSpec(tuple(int(r) for r in obj["radicands"]))
        return AlgebraicScalar(field, {k: to_fraction(v) for k, v in obj["coeffs"].items()})
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise ValueError(f"not an exact scalar: {obj!r}")
    return AlgebraicScalar.rational(to_fraction(obj))


def vector_to_json(v: AlgebraicVector) -> list:
    return [scalar_to_json(e) for e in v]


def vector_from_json(obj) -> AlgebraicVector:
    return AlgebraicVector([scalar_from_json(e) for e in obj])


_KEYED = re.compile(r"^(\w+)\[(-?\d+)\]$")


def lattice_ref(L: QuadLattice):
    """Catalog name when the lattice came from the catalog, else the inline Gram."""
    if L.name:
        try:
            if lattice_from_json(L.name) == L:
                return L.name
        except DomainError:
            pass
    return L.to_json()


def lattice_from_json(obj) -> QuadLattice:
    if isinstance(obj, str):
        m = _KEYED.match(obj)
        return catalog_lookup(m.group(1), int(m.group(2))) if m else catalog_lookup(obj)
    return QuadLattice.from_json(obj)


def _plane_json(V: PeriodPoint) -> dict:
    return {"span": [vector_to_json(w) for w in V.span]}


def period_to_json(V: PeriodPoint) -> dict:
    return {"lattice": lattice_ref(V.lattice), **_plane_json(V)}


def period_from_json(obj, lattice: QuadLattice | None = None) -> PeriodPoint:
    L = lattice if lattice is not None else lattice_from_json(obj["lattice"])
    return PeriodPoint(L, tuple(vector_from_json(w) for w in obj["span"]))


def line_to_json(l: LineRep) -> dict:
    return {"lattice": lattice_ref(l.lattice), "re": vector_to_json(l.re), "im": vector_to_json(l.im)}


def line_from_json(obj, lattice: QuadLattice | None = None) -> LineRep:
    L = lattice if lattice is not None else lattice_from_json(obj["lattice"])
    return validate_line(L, vector_from_json(obj["re"]), vector_from_json(obj["im"]))


def hkline_to_json(W: HKLine) -> dict:
    return {"span": [vector_to_json(w) for w in W.span]}


def hkline_from_json(obj, lattice: QuadLattice | None = None) -> HKLine:
    L = lattice if lattice is not None else lattice_from_json(obj["lattice"])
    return HKLine(L, tuple(vector_from_json(w) for w in obj["span"]))


def chain_to_json(c: SubtwistorChain) -> dict:
    return {
        "lattice": lattice_ref(c.lattice),
        "lines": [hkline_to_json(W) for W in c.lines],
        "junctions": [_plane_json(V) for V in c.junctions],
        "endpoints": [_plane_json(V) for V in c.endpoints],
        "generic_certificates": [W.certificate or genericity_certificate(W.lattice, W.span)
                                 for W in c.lines],
    }


def chain_from_json(obj, lattice: QuadLattice | None = None) -> SubtwistorChain:
    L = lattice if lattice is not None else lattice_from_json(obj["lattice"])
    return SubtwistorChain(
        L,
        tuple(hkline_from_json(W, L) for W in obj["lines"]),
        tuple(period_from_json(V, L) for V in obj["junctions"]),
        tuple(period_from_json(V, L) for V in obj["endpoints"]),
    )


def isometry_to_json(A: Isometry) -> dict:
    return {"lattice": lattice_ref(A.lattice), "matrix": [list(r) for r in A.matrix]}


def isometry_from_json(obj, lattice: QuadLattice | None = None) -> Isometry:
    L = lattice if lattice is not None else lattice_from_json(obj["lattice"])
    return Isometry(L, tuple(tuple(int(x) for x in r) for r in obj["matrix"]))


def load(path: str | Path):
    return json.loads(Path(path).read_text())


def dumps(obj) -> str:
    """Canonical text: fixed key order, compact separators, trailing newline."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True) + "\n"

