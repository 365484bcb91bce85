"""Numeric metric layer: sphere distances, the Pluecker lower bound, and d_tw upper bounds."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .chain import ChainReport, SubtwistorChain, concatenate, validate_chain
from .errors import DomainError
from .ghk import (
    Construction,
    HKLine,
    build_construction,
    connect_chain,
    generic_line_through,
    incident,
    is_generic,
    is_generic_vector,
)
from .linalg import coordinates, is_positive_definite
from .period import PeriodPoint, restricted_gram

__all__ = [
    "AuxMetric", "DtwOptions", "SubtwistorChain", "ChainReport", "validate_chain",
    "concatenate", "fs_distance", "dg_lower", "chain_length", "dtw_upper",
]


@dataclass(frozen=True, eq=False)
class AuxMetric:
    """Auxiliary Euclidean metric g on the ambient space (lattice coordinates)."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DomainError("dimension", "metric Gram must be square")
        if not np.allclose(g, g.T, rtol=0, atol=0):
            raise DomainError("invalid-parameter", "metric Gram must be symmetric")
        try:
            chol = np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise DomainError("positivity", "metric Gram is not positive definite") from None
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_frame", chol.T)

    @classmethod
    def identity(cls, n: int) -> "AuxMetric":
        return cls(np.eye(n))

    def orthonormal_coords(self, x: np.ndarray) -> np.ndarray:
        """Coordinates in which g is the standard dot product."""
        return self._frame @ x

    def to_json(self) -> dict:
        return {"gram": self.gram.tolist()}


def _metric(g, n: int) -> AuxMetric:
    return AuxMetric.identity(n) if g is None else g


def _angle(p: np.ndarray, q: np.ndarray) -> float:
    """Angle between unit vectors, accurate near 0 and pi."""
    return 2.0 * math.atan2(np.linalg.norm(p - q), np.linalg.norm(p + q))


def _unit(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x)


def _bivector(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    outer = np.outer(u, v)
    iu = np.triu_indices(len(u), 1)
    return _unit((outer - outer.T)[iu])


def _plane_floats(V: PeriodPoint) -> tuple[np.ndarray, np.ndarray]:
    return np.array(V.u.to_floats()), np.array(V.v.to_floats())


def plucker_angle(g: AuxMetric, u1, v1, u2, v2) -> float:
    f = g.orthonormal_coords
    return _angle(_bivector(f(u1), f(v1)), _bivector(f(u2), f(v2)))


def fs_distance(W: HKLine, V1: PeriodPoint, V2: PeriodPoint, g: AuxMetric | None = None) -> float:
    """Great-circle distance on S_W: angle between the oriented g-unit normals of V1, V2 in W."""
    if not (W.contains_plane(V1) and W.contains_plane(V2)):
        raise DomainError("membership", "period point is not on the hyperkaehler line")
    g = _metric(g, W.lattice.rank)
    B = np.array([w.to_floats() for w in W.span])
    gw = B @ g.gram @ B.T
    frame = np.linalg.cholesky(gw).T

    def normal(V):
        cu = np.array([float(c) for c in coordinates(W.span, V.u)])
        cv = np.array([float(c) for c in coordinates(W.span, V.v)])
        return _unit(np.cross(frame @ cu, frame @ cv))

    return _angle(normal(V1), normal(V2))


def dg_lower(V1: PeriodPoint, V2: PeriodPoint, g: AuxMetric | None = None) -> float:
    """Angle between the g-unit bivectors of V1 and V2 (oriented Pluecker embedding).

    A lower bound for the Riemannian distance d_g on the Grassmannian.
    """
    if V1.lattice != V2.lattice:
        raise DomainError("lattice-mismatch", "period points on different lattices")
    g = _metric(g, V1.lattice.rank)
    return plucker_angle(g, *_plane_floats(V1), *_plane_floats(V2))


def chain_length(c: SubtwistorChain, g: AuxMetric | None = None, check: bool = True) -> float:
    """Sum of sphere distances between consecutive chain points."""
    if check:
        report = validate_chain(c)
        if not report:
            raise DomainError("invalid-chain", f"{report.clause}: {report.detail}")
    pts = c.points
    return math.fsum(fs_distance(W, pts[i], pts[i + 1], g) for i, W in enumerate(c.lines))


@dataclass(frozen=True)
class DtwOptions:
    seed: int = 0
    restarts: int = 2
    iters: int = 10
    threads: int = 1
    step: Fraction = Fraction(1, 4)


# refinement of a 4-line construction --------------------------------------------

class _Refiner:
    """Compass search over the bridge vectors a, z (in Wx) and b, u (in Wy).

    Trial moves are scored in floating point; a move is accepted only after the
    exact checks (a generic, both bridges positive definite) pass.
    """

    def __init__(self, con: Construction, g: AuxMetric):
        self.con = con
        self.g = g
        self.L = con.Vx.lattice
        self.dirs = {"a": self._unit_dirs(con.Wx), "z": self._unit_dirs(con.Wx),
                     "b": self._unit_dirs(con.Wy), "u": self._unit_dirs(con.Wy)}
        self.base = {k: getattr(con, k) for k in "abzu"}
        self.base = {k: v * self._scale(v) for k, v in self.base.items()}
        self.fbase = {k: np.array(v.to_floats()) for k, v in self.base.items()}
        self.fdirs = {k: [np.array(d.to_floats()) for d in ds] for k, ds in self.dirs.items()}
        self.G = np.array(self.L.gram, dtype=float)
        self.x = _plane_floats(con.Vx)
        self.y = _plane_floats(con.Vy)

    def _scale(self, v) -> Fraction:
        f = np.array(v.to_floats())
        # power of two within a factor sqrt(2) of 1/|v|_g, keeps exact arithmetic cheap
        e = round(math.log2(float(f @ self.g.gram @ f)) / 2)
        return Fraction(2) ** -e

    def _unit_dirs(self, W: HKLine):
        return [w * self._scale(w) for w in W.span]

    def numeric(self, theta: dict) -> tuple[float, tuple]:
        vecs = {k: self.fbase[k] + sum(float(t) * d for t, d in zip(theta[k], self.fdirs[k]))
                for k in "abzu"}
        a, b, z, u = vecs["a"], vecs["b"], vecs["z"], vecs["u"]
        for span in ((z, a, b), (a, b, u)):
            M = np.array(span)
            try:
                np.linalg.cholesky(M @ self.G @ M.T)
            except np.linalg.LinAlgError:
                return math.inf, ()
        f = self.g.orthonormal_coords
        biv = [_bivector(f(p), f(q)) for p, q in (self.x, (a, z), (a, b), (b, u), self.y)]
        # reversing a junction negates its bivector
        best, best_flips = math.inf, ()
        for flips in itertools.product((False, True), repeat=3):
            signs = (1, *(-1 if fl else 1 for fl in flips), 1)
            total = math.fsum(_angle(signs[i] * biv[i], signs[i + 1] * biv[i + 1]) for i in range(4))
            if total < best - 1e-15:
                best, best_flips = total, flips
        return best, best_flips

    def exact(self, theta: dict) -> Construction | None:
        vecs = {}
        for k in "abzu":
            v = self.base[k]
            for t, d in zip(theta[k], self.dirs[k]):
                if t:
                    v = v + d * t
            vecs[k] = v.primitive()
        a, b, z, u = vecs["a"], vecs["b"], vecs["z"], vecs["u"]
        for span in ((z, a, b), (a, b, u)):
            if not is_positive_definite(restricted_gram(self.L, span)):
                return None
        if theta["a"] != self._zero()["a"] and not is_generic_vector(self.L, a):
            return None
        return replace(self.con, a=a, b=b, z=z, u=u)

    @staticmethod
    def _zero():
        return {k: (Fraction(0),) * 3 for k in "abzu"}

    def run(self, iters: int, step: Fraction) -> tuple[float, Construction]:
        theta = self._zero()
        best, flips = self.numeric(theta)
        con = replace(self.con, flips=flips)
        h = step
        for _ in range(iters):
            improved = False
            for k in "azbu":
                for i in range(3):
                    for sgn in (1, -1):
                        trial = dict(theta)
                        coords = list(trial[k])
                        coords[i] += sgn * h
                        trial[k] = tuple(coords)
                        val, fl = self.numeric(trial)
                        if val < best - 1e-12:
                            cand = self.exact(trial)
                            if cand is not None:
                                theta, best, con = trial, val, replace(cand, flips=fl)
                                improved = True
            if not improved:
                h /= 2
        return best, con


def _restart(Vx, Vy, g, opts: DtwOptions, r: int):
    seed = opts.seed + 7919 * r
    try:
        con = build_construction(Vx, Vy, seed)
    except DomainError:
        return None
    value, con = _Refiner(con, g).run(opts.iters, opts.step)
    chain = con.assemble()
    return chain_length(chain, g, check=False), chain


def dtw_upper(Vx: PeriodPoint, Vy: PeriodPoint, g: AuxMetric | None = None,
              opts: DtwOptions | None = None,
              candidates: tuple[SubtwistorChain, ...] = ()) -> tuple[float, SubtwistorChain]:
    """Certified upper bound for the subtwistor distance, with its witness chain.

    The value is the length of an exactly validated chain of GHK lines, minimised
    over restarts of the 4-line construction (each refined by local search),
    the direct single-line chain when it exists, and any extra candidate chains.
    """
    opts = opts or DtwOptions()
    L = Vx.lattice
    g = _metric(g, L.rank)
    relation = Vx.relation(Vy)
    if relation == 1:
        return 0.0, SubtwistorChain(L, (), (), (Vx, Vy))

    scored: list[tuple[float, int, SubtwistorChain]] = []
    for i, c in enumerate(candidates):
        if c.endpoints[0].relation(Vx) == 1 and c.endpoints[1].relation(Vy) == 1 and validate_chain(c):
            scored.append((chain_length(c, g, check=False), i, c))

    direct = None
    if relation == -1:
        direct = SubtwistorChain(L, (generic_line_through(Vx, opts.seed),), (), (Vx, Vy))
    else:
        W = incident(Vx, Vy)
        if W is not None and is_generic(W):
            direct = SubtwistorChain(L, (W,), (), (Vx, Vy))
    if direct is not None:
        # a single sphere realises the lower bound, so no refinement can beat it
        scored.append((chain_length(direct, g, check=False), -1, direct))
    else:
        def work(r):
            return _restart(Vx, Vy, g, opts, r)

        if opts.threads > 1:
            with ThreadPoolExecutor(max_workers=opts.threads) as pool:
                results = list(pool.map(work, range(opts.restarts)))
        else:
            results = [work(r) for r in range(opts.restarts)]
        for r, res in enumerate(results):
            if res is not None:
                scored.append((res[0], len(candidates) + r, res[1]))
    if not scored:
        chain = connect_chain(Vx, Vy, opts.seed)
        scored.append((chain_length(chain, g, check=False), len(candidates), chain))
    value, _, chain = min(scored, key=lambda t: (t[0], t[1]))
    report = validate_chain(chain)
    if not report:
        raise DomainError("invalid-chain", f"{report.clause}: {report.detail}")
    return value, chain
