"""Subtwistor chains: sequences of hyperkaehler lines joined at shared period points."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .lattice import QuadLattice
from .linalg import in_span
from .period import PeriodPoint


@dataclass(frozen=True, eq=False)
class SubtwistorChain:
    """Lines S_1..S_n, junctions s_i in S_i and S_{i+1}, endpoints x in S_1, y in S_n.

    An empty chain (no lines) joins a point to itself.
    """

    lattice: QuadLattice
    lines: tuple = ()
    junctions: tuple = ()
    endpoints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "junctions", tuple(self.junctions))
        object.__setattr__(self, "endpoints", tuple(self.endpoints))

    @property
    def points(self) -> list[PeriodPoint]:
        """x, s_1, ..., s_{n-1}, y."""
        x, y = self.endpoints
        return [x, *self.junctions, y]

    def __len__(self):
        return len(self.lines)


@dataclass(frozen=True)
class ChainReport:
    ok: bool
    clause: str | None = None
    detail: str = ""
    checked: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _plane_in_line(V: PeriodPoint, W) -> bool:
    return all(in_span(W.span, w) for w in V.span)


def validate_chain(c: SubtwistorChain) -> ChainReport:
    """Exact check of every membership, genericity and positivity clause.

    Returns a report naming the first violated clause.
    """
    from .ghk import HKLine, is_generic

    if len(c.endpoints) != 2:
        return ChainReport(False, "endpoints", "a chain needs exactly two endpoints")
    x, y = c.endpoints
    for V in (x, y, *c.junctions):
        if not isinstance(V, PeriodPoint) or V.lattice != c.lattice:
            return ChainReport(False, "lattice", "period point on a different lattice")
    if not c.lines:
        if c.junctions or x.relation(y) != 1:
            return ChainReport(False, "endpoint membership", "empty chain with distinct endpoints")
        return ChainReport(True, checked={"lines": 0})
    if len(c.junctions) != len(c.lines) - 1:
        return ChainReport(False, "count", "need one junction between consecutive lines")
    for i, W in enumerate(c.lines):
        if not isinstance(W, HKLine) or W.lattice != c.lattice:
            return ChainReport(False, "lattice", f"line {i} is not an HKLine on the chain lattice")
        try:
            W.check_positive()
        except DomainError as exc:
            return ChainReport(False, "positivity", f"line {i}: {exc}")
    if not _plane_in_line(x, c.lines[0]):
        return ChainReport(False, "endpoint membership", "x is not on the first line")
    if not _plane_in_line(y, c.lines[-1]):
        return ChainReport(False, "endpoint membership", "y is not on the last line")
    for i, s in enumerate(c.junctions):
        if not (_plane_in_line(s, c.lines[i]) and _plane_in_line(s, c.lines[i + 1])):
            return ChainReport(False, "junction membership",
                               f"junction {i} not contained in lines {i} and {i + 1}")
    for i, W in enumerate(c.lines):
        W.generic = None  # force a fresh exact certificate
        if not is_generic(W):
            return ChainReport(False, "genericity", f"line {i} has rational points in W^perp")
    return ChainReport(True, checked={"lines": len(c.lines), "junctions": len(c.junctions)})


def concatenate(first: SubtwistorChain, second: SubtwistorChain) -> SubtwistorChain:
    """Chain x -> m followed by m -> y; m becomes a junction."""
    if first.lattice != second.lattice:
        raise DomainError("lattice-mismatch", "chains on different lattices")
    x, m1 = first.endpoints
    m2, y = second.endpoints
    if m1.relation(m2) != 1:
        raise DomainError("membership", "chains do not meet at a common point")
    if not first.lines:
        return second
    if not second.lines:
        return first
    return SubtwistorChain(first.lattice, first.lines + second.lines,
                           first.junctions + (m1,) + second.junctions, (x, y))
