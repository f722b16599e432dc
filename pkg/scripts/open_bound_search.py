"""Search for germs with d_e > (n-1)delta - r + t.

Whether this upper bound holds in general is not known; the search only
reports what it finds and proves nothing either way.  Irreducible germs with
t <= 2 are skipped by default, since the bound is known for them.

    python scripts/open_bound_search.py --count 400 --max-n 4
"""
from __future__ import annotations

import argparse
import random
from fractions import Fraction
from math import gcd

from germcodim import Parametrization, ProblemInstance, run


def candidate(rng: random.Random, n: int, r: int) -> Parametrization:
    branches = []
    for _ in range(r):
        while True:
            row = sorted(rng.sample(range(3, 14), n))
            g = 0
            for a in row:
                g = gcd(g, a)
            if g == 1:
                break
        coords = []
        for a in row:
            terms = {a: Fraction(1)}
            for _ in range(rng.randint(0, 2)):
                terms[a + rng.randint(1, 5)] = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))
            coords.append(terms)
        branches.append(coords)
    return Parametrization.from_terms(branches)


def main() -> None:
    ap = argparse.ArgumentParser(description="report germs exceeding (n-1)delta - r + t")
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--include-known", action="store_true", help="also test irreducible germs with t <= 2")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tested = exceeded = tight = 0
    for _ in range(args.count):
        n = rng.randint(3, args.max_n)
        r = rng.choice([1, 1, 2])
        out = run(ProblemInstance(candidate(rng, n, r)), "codim")
        rec = out.record
        t = rec.get("cm_type")
        if out.exit_code != 0 or t is None:
            continue
        if not args.include_known and r == 1 and t <= 2:
            continue
        tested += 1
        bound = rec.get("open_bound")
        de = rec.get("ae_codim")
        tight += de == bound
        if de > bound:
            exceeded += 1
            print(f"d_e = {de} > {bound} = (n-1)delta - r + t: {out.record.values}")
    print(f"tested={tested} exceeded={exceeded} equal={tight}")


if __name__ == "__main__":
    main()
