#!/usr/bin/env python3
"""Run the two bundled worked examples end to end and print what happens.

Usage: python scripts/run_examples.py [--dot DIR]
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from invcat import (  # noqa: E402
    CycleError,
    analyze,
    decompose,
    parse_representation,
    verify_envelope,
)


def show(name, path, dot_dir=None):
    rep = parse_representation(path.read_text())
    print(f"=== {name} ===")
    for mode in ("standard", "literal"):
        a = analyze(rep, mu_mode=mode)
        print(f"  mu={mode}: verdict={a.report.verdict}, "
              f"poset sizes={a.report.poset_sizes}")
        for w in a.report.witnesses[:4]:
            print(f"    witness at {w.object_id}: b={w.b.to_json()} "
                  f"c={w.c.to_json()} value={w.value}")
    a = analyze(rep)
    if a.report.passed and a.pseudo_inverses:
        env = verify_envelope(rep, a.families, a.pseudo_inverses)
        print(f"  envelope: {env.total_morphisms} morphisms, "
              f"bounded={env.bounded}, every morphism has a pseudo-inverse: "
              f"{env.all_have_pseudo_inverse}")
        for gid, m in sorted(a.pseudo_inverses.items()):
            print(f"    {gid}+ = {m.to_json()}")
    try:
        dec = decompose(rep, analysis=a if a.report.passed else None)
        print(f"  decompose: {len(dec.summands)} summands, dims "
              f"{dec.dims_multiset(list(rep.object_ids))}")
    except CycleError as e:
        print(f"  decompose: CycleError ({e.message})")
    except Exception as e:
        print(f"  decompose: {type(e).__name__}: {e}")
    if dot_dir:
        dot_dir.mkdir(parents=True, exist_ok=True)
        for oid in sorted(a.flag.posets):
            out = dot_dir / f"{name}-{oid}.dot"
            out.write_text(a.flag.export_dot(oid))
            print(f"  wrote {out}")
    print()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dot", default=None, help="write Hasse diagrams here")
    args = ap.parse_args()
    dot_dir = Path(args.dot) if args.dot else None
    show("trisection", ROOT / "data" / "trisection.json", dot_dir)
    show("bisection", ROOT / "data" / "bisection.json", dot_dir)


if __name__ == "__main__":
    main()
