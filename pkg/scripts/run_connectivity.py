#!/usr/bin/env python3
"""Connect random pairs of period points by chains of generic lines and report lengths."""

import argparse
import json
import random
import time
from collections import Counter
from dataclasses import asdict, dataclass

from hkperiod.ghk import connect_chain
from hkperiod.lattice import diagonal
from hkperiod.period import PeriodPoint
from hkperiod.scalars import vector
from hkperiod.subtwistor import chain_length, dg_lower, validate_chain


@dataclass
class Config:
    pairs: int = 50
    seed: int = 0
    height: int = 3
    positive: int = 3
    negative: int = 3
    threads: int = 1


def random_plane(L, rng, height):
    while True:
        u, v = ([rng.randint(-height, height) for _ in range(L.rank)] for _ in range(2))
        try:
            return PeriodPoint(L, (vector(u), vector(v)))
        except ValueError:
            continue


def run(cfg: Config) -> dict:
    L = diagonal(*([1] * cfg.positive + [-1] * cfg.negative))
    rng = random.Random(cfg.seed)
    sizes, invalid, ratios = Counter(), 0, []
    t0 = time.perf_counter()
    for i in range(cfg.pairs):
        x, y = random_plane(L, rng, cfg.height), random_plane(L, rng, cfg.height)
        c = connect_chain(x, y, seed=cfg.seed + i, threads=cfg.threads)
        sizes[len(c)] += 1
        if not validate_chain(c):
            invalid += 1
            continue
        low = dg_lower(x, y)
        if low > 0:
            ratios.append(chain_length(c, check=False) / low)
    return {
        "config": asdict(cfg),
        "lines_histogram": {str(k): v for k, v in sorted(sizes.items())},
        "invalid": invalid,
        "length_over_dg": {"min": min(ratios), "max": max(ratios), "mean": sum(ratios) / len(ratios)},
        "seconds": round(time.perf_counter() - t0, 2),
    }


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        p.add_argument(f"--{name}", type=int, default=default)
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=2))
