"""Run every instance file in a directory and print one summary line per file.

    python scripts/run_corpus.py corpus --stage verify
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

from germcodim import Options, parse_instance, run
from germcodim.germ_io import ParseError


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory", type=Path)
    ap.add_argument("--stage", default="verify", choices=("check", "invariants", "codim", "verify"))
    ap.add_argument("--trunc-max", type=int, default=512)
    args = ap.parse_args()
    worst = 0
    for path in sorted(args.directory.glob("*.germ")):
        start = time.perf_counter()
        try:
            inst = parse_instance(path.read_text(), Options(trunc_max=args.trunc_max))
        except ParseError as exc:
            print(f"{path.name:<22} parse error: {exc}")
            worst = max(worst, 1)
            continue
        out = run(inst, args.stage)
        secs = time.perf_counter() - start
        rec = out.record
        fails = len(out.failed_checks)
        print(f"{path.name:<22} exit={out.exit_code} {out.classification:<24} "
              f"delta={rec.get('delta')} d_e={rec.get('ae_codim')} tau={rec.get('tjurina')} "
              f"checks={len(out.checks) - fails}/{len(out.checks)} {secs:.2f}s")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
