"""Random differential run: jet-space codimension against the closed formulas.

Draws primitive monomial and perturbed-monomial parametrizations in C^2, C^3
and C^4, runs the pipeline, and tallies certified instances, formula
mismatches and inequality-chain violations.

    python scripts/differential.py --count 500 --seed 1
"""
from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from germcodim import Parametrization, ProblemInstance, run


@dataclass
class Config:
    count: int = 300
    seed: int = 0
    max_exponent: int = 9
    two_branch_rate: float = 0.15
    ceiling: int = 512


def random_parametrization(rng: random.Random, cfg: Config, n: int) -> Parametrization:
    r = 2 if rng.random() < cfg.two_branch_rate else 1
    branches = []
    for i in range(r):
        high = cfg.max_exponent if i == 0 else 4
        while True:
            row = [rng.randint(1 if i else 2, high) for _ in range(n)]
            g = 0
            for a in row:
                g = gcd(g, a)
            if g == 1:
                break
        coords = [{a: Fraction(rng.choice([1, 2, -1, 3]), rng.choice([1, 2]))} for a in row]
        if rng.random() < 0.5:
            j = rng.randrange(n)
            coords[j][min(coords[j]) + rng.randint(1, 4)] = Fraction(rng.choice([1, -2, 3]))
        branches.append(coords)
    return Parametrization.from_terms(branches)


def main() -> None:
    ap = argparse.ArgumentParser(description="formula-vs-oracle differential run")
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--max-exponent", type=int, default=Config.max_exponent)
    args = ap.parse_args()
    cfg = Config(args.count, args.seed, args.max_exponent)
    rng = random.Random(cfg.seed)
    tally = {"certified": 0, "undetermined": 0, "formula": 0, "chain": 0, "other": 0}
    start = time.perf_counter()
    for k in range(cfg.count):
        phi = random_parametrization(rng, cfg, (2, 3, 4)[k % 3])
        out = run(ProblemInstance(phi), "codim")
        if out.exit_code == 3:
            tally["undetermined"] += 1
            continue
        tally["certified"] += 1
        for c in out.failed_checks:
            key = "chain" if c.name.startswith("chain:") else "formula" if "d_e oracle" in c.name else "other"
            tally[key] += 1
            print(f"mismatch: {c.name} ({c.detail}) on {phi}")
    print(" ".join(f"{k}={v}" for k, v in tally.items()), f"in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
