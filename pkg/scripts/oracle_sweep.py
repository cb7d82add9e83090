#!/usr/bin/env python3
"""Sweep random meet-closed families over GF(2) and compare the Moebius
score against the exhaustive projection-family search.

The two agree on most draws but not all: families of three coplanar lines
inside a strictly larger ambient space score nonnegative everywhere while no
multiplicative projection family exists.  This script measures the rate and
prints every disagreement it finds.

Usage: python scripts/oracle_sweep.py [--samples N] [--seed S]
"""

import argparse
import json
import random
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from invcat import GF, OracleInstance, build_poset, oracle_exists_family  # noqa: E402
from invcat.criterion import poset_passes  # noqa: E402

from conftest import random_meet_closed_family  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    field = GF(2)
    start = time.time()
    mismatches = 0
    for k in range(args.samples):
        n = rng.choice([2, 3])
        fam = random_meet_closed_family(rng, field, n)
        crit = poset_passes(build_poset(fam))
        orc, _ = oracle_exists_family(OracleInstance(field, n, tuple(fam)))
        if crit != orc:
            mismatches += 1
            print(f"[{k}] criterion={crit} oracle={orc} family="
                  f"{json.dumps([s.to_json() for s in fam])}")
    rate = mismatches / args.samples
    print(f"{mismatches}/{args.samples} disagreements "
          f"({rate:.2%}) in {time.time() - start:.1f} s")


if __name__ == "__main__":
    main()
