#!/usr/bin/env python3
"""Spinorial norms of pseudo-reflections on the K3-type catalog lattices."""

import argparse
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass

from hkperiod.lattice import catalog_lookup, direct_sum
from hkperiod.ortho import Isometry, pseudo_reflection, ref_equals_oplus, spinorial_norm
from hkperiod.scalars import vector


@dataclass
class Config:
    samples: int = 300
    seed: int = 0
    max_n: int = 20


def random_root(L, rng):
    # fix the first hyperbolic pair so that the norm comes out to +-2
    while True:
        v = [0, 0] + [rng.randint(-2, 2) for _ in range(L.rank - 2)]
        rest = L.q(vector(v), vector(v)).as_fraction()
        t = (rng.choice((2, -2)) - rest) / 2
        if t.denominator == 1:
            t = int(t)
            d = rng.choice([k for k in range(1, abs(t) + 1) if t % k == 0] or [1])
            v[0], v[1] = d, t // d
            return v


def hyperbolic(m):
    return direct_sum(*[catalog_lookup("U")] * m)


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    out = {}
    for name, L in [("K3", catalog_lookup("K3")), ("K3n[3]", catalog_lookup("K3n", 3)),
                    ("K3n[5]", catalog_lookup("K3n", 5))]:
        tally = Counter()
        for _ in range(cfg.samples):
            v = random_root(L, rng)
            rho = pseudo_reflection(L, v)
            tally[f"norm {L.q(vector(v), vector(v)).as_fraction()}: nu={spinorial_norm(rho)}"] += 1
        tally[f"-Id: nu={spinorial_norm(Isometry.minus_identity(L))}"] += 1
        out[name] = dict(tally)
    # the sign of a reflection flips with the number of positive directions
    out["rho_(1,1) on U^m"] = {m: spinorial_norm(pseudo_reflection(hyperbolic(m), [1, 1] + [0] * (2 * m - 2)))
                               for m in (1, 2, 3)}
    out["ref_equals_oplus"] = [n for n in range(2, cfg.max_n + 1) if ref_equals_oplus(n)]
    return {"config": asdict(cfg), **out}


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        p.add_argument(f"--{name}", type=int, default=default)
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=2))
