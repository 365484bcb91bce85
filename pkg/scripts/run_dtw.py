#!/usr/bin/env python3
"""Sandwich dg <= dtw on random pairs, tracking how the upper bound falls with search effort."""

import argparse
import json
import random
import statistics
from dataclasses import asdict, dataclass

from hkperiod.lattice import diagonal
from hkperiod.subtwistor import DtwOptions, dg_lower, dtw_upper

from run_connectivity import random_plane


@dataclass
class Config:
    pairs: int = 10
    seed: int = 1
    restarts: int = 2
    iters: tuple = (0, 2, 5, 10)
    threads: int = 1


def run(cfg: Config) -> dict:
    L = diagonal(1, 1, 1, -1, -1, -1)
    rng = random.Random(cfg.seed)
    rows = []
    for _ in range(cfg.pairs):
        x, y = random_plane(L, rng, 3), random_plane(L, rng, 3)
        low = dg_lower(x, y)
        ups = [dtw_upper(x, y, opts=DtwOptions(seed=cfg.seed, restarts=cfg.restarts, iters=k,
                                               threads=cfg.threads))[0] for k in cfg.iters]
        rows.append({"dg": low, "dtw": ups})
    gaps = {k: statistics.mean(r["dtw"][j] / r["dg"] for r in rows) for j, k in enumerate(cfg.iters)}
    return {"config": asdict(cfg), "mean_ratio_by_iters": gaps, "pairs": rows}


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--pairs", type=int, default=Config.pairs)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--restarts", type=int, default=Config.restarts)
    p.add_argument("--iters", type=int, nargs="+", default=list(Config.iters))
    p.add_argument("--threads", type=int, default=Config.threads)
    a = p.parse_args()
    print(json.dumps(run(Config(a.pairs, a.seed, a.restarts, tuple(a.iters), a.threads)), indent=2))
