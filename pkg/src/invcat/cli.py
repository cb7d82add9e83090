"""Command-line front end.

Exit codes: 0 = pass/verified, 1 = fail/refuted, 2 = error.  All reports are
JSON on stdout (or -o FILE); for fixed input bytes and flags the output bytes
are identical run to run.  Timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .decompose import BlockcodeDecomposition, decompose, verify_decomposition
from .errors import AxiomViolation, CriterionViolated, InputSyntaxError, ToolError
from .flag import ClosureLimits
from .pipeline import analyze
from .poset import mobius
from .realize import EnvelopeLimits, verify_envelope
from .rep import parse_representation


def _dump(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_rep(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputSyntaxError(f"cannot read {path}: {e}") from e
    return parse_representation(data)


def _limits(args: argparse.Namespace) -> ClosureLimits:
    return ClosureLimits(
        max_rounds=args.max_rounds,
        max_elements_per_object=args.max_elements,
    )


def _cmd_check(args: argparse.Namespace) -> int:
    rep = _load_rep(args.input)
    analysis = analyze(rep, _limits(args), mu_mode=args.mu)
    doc = analysis.report.to_json()
    doc["command"] = "check"
    if analysis.saturation_note:
        doc["saturation_note"] = analysis.saturation_note
    _dump(doc, args.output)
    print(f"check: {analysis.report.verdict} ({analysis.report.timing_ms:.1f} ms)", file=sys.stderr)
    return 0 if analysis.report.passed else 1


def _cmd_flag(args: argparse.Namespace) -> int:
    rep = _load_rep(args.input)
    analysis = analyze(rep, _limits(args), mu_mode=args.mu)
    doc = analysis.flag.to_json()
    doc["command"] = "flag"
    _dump(doc, args.output)
    if args.dot:
        dot_dir = Path(args.dot)
        dot_dir.mkdir(parents=True, exist_ok=True)
        for oid in sorted(analysis.flag.posets):
            (dot_dir / f"{oid}.dot").write_text(analysis.flag.export_dot(oid), encoding="utf-8")
    return 0


def _cmd_mobius(args: argparse.Namespace) -> int:
    rep = _load_rep(args.input)
    analysis = analyze(rep, _limits(args), mu_mode=args.mu)
    objects = {}
    for oid in sorted(analysis.flag.posets):
        p = analysis.flag.posets[oid]
        table = mobius(p)
        objects[oid] = {
            "elements": [s.to_json() for s in p.elements],
            "one_var": list(table.one_var),
            "two_var": [list(r) for r in table.two_var],
        }
    _dump({"command": "mobius", "objects": objects}, args.output)
    return 0


def _cmd_decompose(args: argparse.Namespace) -> int:
    rep = _load_rep(args.input)
    dec = decompose(rep, _limits(args))
    doc = dec.to_json()
    doc["command"] = "decompose"
    _dump(doc, args.output)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    rep = _load_rep(args.input)
    try:
        cert_doc = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputSyntaxError(f"cannot read {args.certificate}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputSyntaxError(f"malformed certificate JSON: {e}") from e
    dec = BlockcodeDecomposition.from_json(cert_doc, rep)
    outcome = verify_decomposition(rep, dec)
    _dump(
        {"command": "verify", "verified": outcome.ok, "problems": outcome.problems},
        args.output,
    )
    return 0 if outcome.ok else 1


def _cmd_envelope(args: argparse.Namespace) -> int:
    rep = _load_rep(args.input)
    analysis = analyze(rep, _limits(args), mu_mode="standard")
    if not analysis.standard_report.passed:
        doc = analysis.standard_report.to_json()
        doc["command"] = "envelope"
        doc["note"] = "criterion fails; no inverse envelope exists"
        _dump(doc, args.output)
        return 1
    if analysis.families is None or analysis.pseudo_inverses is None:
        raise CriterionViolated(
            "projection families unavailable"
            + (f" ({analysis.saturation_note})" if analysis.saturation_note else "")
        )
    try:
        env = verify_envelope(
            rep,
            analysis.families,
            analysis.pseudo_inverses,
            EnvelopeLimits(max_words=args.max_words, max_matrices_per_hom=args.max_matrices),
        )
    except AxiomViolation as e:
        _dump({"command": "envelope", "verified": False, "violation": e.to_json()}, args.output)
        return 1
    doc = env.to_json()
    doc["command"] = "envelope"
    doc["verified"] = True
    doc["families"] = {
        oid: fam.to_json() for oid, fam in sorted(analysis.families.items())
    }
    _dump(doc, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invcat",
        description=(
            "Decide, in exact arithmetic, whether a diagram of linear maps "
            "factors through an inverse category, and decompose cycle-free "
            "diagrams into blockcodes."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_mu: bool = True) -> None:
        p.add_argument("input", help="representation JSON file")
        if with_mu:
            p.add_argument("--mu", choices=("standard", "literal"), default="standard",
                           help="Moebius weighting mode (default: standard)")
        p.add_argument("--max-rounds", type=int, default=64, help="closure round limit")
        p.add_argument("--max-elements", type=int, default=4096,
                       help="per-object flag size limit")
        p.add_argument("-o", "--output", default=None, help="write the JSON report here")

    p_check = sub.add_parser("check", help="evaluate the factorization criterion")
    common(p_check)
    p_check.set_defaults(fn=_cmd_check)

    p_flag = sub.add_parser("flag", help="report the per-object subspace flags")
    common(p_flag)
    p_flag.add_argument("--dot", default=None, metavar="DIR",
                        help="also write one Graphviz file per object")
    p_flag.set_defaults(fn=_cmd_flag)

    p_mob = sub.add_parser("mobius", help="print Moebius tables of the flag posets")
    common(p_mob)
    p_mob.set_defaults(fn=_cmd_mobius)

    p_dec = sub.add_parser("decompose", help="decompose into blockcodes (cycle-free only)")
    common(p_dec, with_mu=False)
    p_dec.set_defaults(fn=_cmd_decompose)

    p_ver = sub.add_parser("verify", help="re-check a decomposition certificate")
    p_ver.add_argument("input", help="representation JSON file")
    p_ver.add_argument("certificate", help="certificate JSON file")
    p_ver.add_argument("-o", "--output", default=None)
    p_ver.set_defaults(fn=_cmd_verify)

    p_env = sub.add_parser("envelope", help="synthesize pseudo-inverses and verify axioms")
    common(p_env, with_mu=False)
    p_env.add_argument("--max-words", type=int, default=10_000)
    p_env.add_argument("--max-matrices", type=int, default=1_000)
    p_env.set_defaults(fn=_cmd_envelope)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ToolError as e:
        _dump({"error": e.to_json()}, getattr(args, "output", None))
        print(f"error: {e.code}: {e.message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
