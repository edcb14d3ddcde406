"""Command-line front end.

Exit codes: 0 certified/holds, 1 inconclusive/fails (report still printed),
2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from sympy import isprime

from .charpair import CharacteristicError, induced_characteristic, local_group_order
from .complexes import ComplexError, natural_key
from .io import (SchemaError, building_sequence_from_dict, complex_from_dict,
                 pair_from_dict, read_json_arg, weights_from_dict)
from .linalg import LinalgError
from .presentation import PresentationRefused, emit_presentation
from .qcw import (BuildingSequenceError, analyze_even_building_sequence,
                  analyze_general_building_sequence, candidate_primes)
from .retraction import (BUDGET_ENV, RetractionError, admissibility,
                         check_bss_condition, enumerate_retraction_sequences,
                         per_prime_verdict, retraction_from_vertices)
from .wgrass import WeightError, WeightVector, grassmann_torsion_report, young_lattice_dot

COMMANDS = ("analyze-toric", "retract", "qcw", "grassmann", "present")
INPUT_ERRORS = (SchemaError, ComplexError, CharacteristicError, LinalgError,
                BuildingSequenceError, WeightError, RetractionError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Invocation:
    command: str
    args: argparse.Namespace

    @property
    def fmt(self) -> str:
        return self.args.format


def _prime(text):
    p = int(text)
    if not isprime(p):
        raise argparse.ArgumentTypeError(f"{text} is not a prime")
    return p


def _weights(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orbitor",
                     description="Per-prime torsion certificates for toric orbifolds, "
                                 "q-CW complexes and weighted Grassmannians.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze-toric", parents=[common],
                       help="certify torsion-freeness of a toric orbifold")
    p.add_argument("--input", required=True, help="pair JSON: path, inline JSON or -")
    p.add_argument("--prime", type=_prime, action="append", help="restrict to this prime")
    p.add_argument("--check", choices=("primes", "bss", "all"), default="primes")
    p.add_argument("--node-budget", type=int, default=None,
                   help=f"search budget per prime (default: ${BUDGET_ENV} or unlimited)")
    p.add_argument("--face", action="append", help="also print induced data on this face")
    p.add_argument("--basis-hint", help="JSON matrix of a unimodular basis for --face")

    p = sub.add_parser("retract", parents=[common], help="list retraction sequences")
    p.add_argument("--input", required=True, help="polytope, poset or pair JSON")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--order", help="comma-separated vertex order to replay")

    p = sub.add_parser("qcw", parents=[common], help="analyze a building sequence")
    p.add_argument("--input", required=True, help="building sequence JSON")
    p.add_argument("--prime", type=_prime, action="append")

    p = sub.add_parser("grassmann", parents=[common], help="weighted Grassmannian report")
    p.add_argument("--input", help="JSON with d, n, w, r")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--w", type=_weights)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--dot", action="store_true", help="print the Young lattice as DOT")

    p = sub.add_parser("present", parents=[common],
                       help="cohomology presentation of a certified toric orbifold")
    p.add_argument("--input", required=True)
    p.add_argument("--node-budget", type=int, default=None)
    return parser


def parse_invocation(argv) -> Invocation:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
    if args.command == "grassmann" and args.input is None:
        if args.d is None or args.n is None:
            raise UsageError("grassmann needs --input or both --d and --n")
    if getattr(args, "basis_hint", None) and not args.face:
        raise UsageError("--basis-hint needs --face")
    return Invocation(args.command, args)


# -- commands ----------------------------------------------------------------

def _seq_lines(records, indent="    "):
    out = []
    for r in records:
        g = f"  g={r['g']}" if "g" in r else ""
        out.append(f"{indent}{r['stage']}: {r['vertex']} in {r['face']} (dim {r['face_dim']}){g}")
    return out


def _analyze_toric(args):
    pair = pair_from_dict(read_json_arg(args.input))
    payload, ok = {}, True
    if args.check in ("primes", "all"):
        report = per_prime_verdict(pair, args.prime, args.node_budget)
        payload.update(report.to_dict())
        ok = ok and all(v.status == "certified" for v in report.verdicts.values())
    if args.check in ("bss", "all"):
        bss = check_bss_condition(pair)
        payload["bss"] = bss.to_dict()
        ok = ok and bss.holds
    if args.face:
        hint = read_json_arg(args.basis_hint) if args.basis_hint else None
        induced = {}
        for E in args.face:
            ind = induced_characteristic(pair, E, hint)
            verts = sorted(pair.complex.face(E).vertices, key=natural_key)
            induced[E] = {
                "basis": [list(r) for r in ind.quotient.basis_choice],
                "lambda": {F: list(v) for F, v in ind.lambda_E.items()},
                "g": {v: local_group_order(pair, E, v, hint) for v in verts},
            }
        payload["induced"] = induced
    return payload, ok


def _analyze_toric_text(d):
    lines = []
    if "candidate_primes" in d:
        lines.append(f"candidate primes: {d['candidate_primes']}")
        for p, v in d["verdicts"].items():
            lines.append(f"  p={p}: {v['status']}")
            if "witness" in v:
                lines += _seq_lines(v["witness"])
        lines.append(f"global: {d['global']}")
    if "bss" in d:
        b = d["bss"]
        lines.append(f"bss condition: {b['status']} ({b['stages_checked']} stages checked)")
        w = b.get("witness")
        if w and "stage" in w:
            deleted = ", ".join(w["deleted"]) or "nothing"
            lines.append(f"  stage B_{w['stage']} (after deleting {deleted}): gcd {w['gcd']}")
            for fv in w["free_vertices"]:
                lines.append(f"    {fv['vertex']} in {fv['face']}: g={fv['g']}")
        elif w:
            lines.append(f"  {w['reason']}")
    for E, info in d.get("induced", {}).items():
        lines.append(f"face {E}: basis {info['basis']}")
        for F, v in info["lambda"].items():
            lines.append(f"  lambda({F}) = {tuple(v)}")
        for v, g in info["g"].items():
            lines.append(f"  g({v}) = {g}")
    return lines


def _retract(args):
    data = read_json_arg(args.input)
    obj = pair_from_dict(data) if "lambda" in data else complex_from_dict(data)
    Q = getattr(obj, "complex", obj)
    adm = admissibility(Q)
    payload = {"admissible": adm.admissible, "reachable_stages": adm.reachable_stages,
               "stuck": [list(s) for s in adm.stuck]}
    if args.order:
        seq = retraction_from_vertices(obj, [v.strip() for v in args.order.split(",")])
        payload["sequences"] = [seq.records()]
    else:
        seqs = enumerate_retraction_sequences(obj, limit=args.limit)
        payload["sequences"] = [s.records() for s in seqs]
        payload["limit"] = args.limit
    return payload, adm.admissible


def _retract_text(d):
    lines = [f"admissible: {'yes' if d['admissible'] else 'no'} "
             f"({d['reachable_stages']} reachable stages)"]
    for s in d["stuck"]:
        lines.append(f"  stuck after deleting {', '.join(s)}")
    for i, recs in enumerate(d["sequences"], 1):
        lines.append(f"sequence {i}:")
        lines += _seq_lines(recs)
    return lines


def _qcw(args):
    seq = building_sequence_from_dict(read_json_arg(args.input))
    general = not seq.all_even
    primes = args.prime or list(candidate_primes([seq], with_degrees=general))
    fn = analyze_general_building_sequence if general else analyze_even_building_sequence
    verdicts = {p: fn(seq, p) for p in sorted(set(primes))}
    ok = all(v.certified for v in verdicts.values())
    payload = {"criterion": "general" if general else "even",
               "building_sequence": seq.to_dict(),
               "candidate_primes": sorted(set(primes)),
               "verdicts": {str(p): v.to_dict() for p, v in verdicts.items()},
               "global": "certified" if ok else "inconclusive"}
    return payload, ok


def _qcw_text(d):
    lines = [f"criterion: {d['criterion']}, {len(d['building_sequence']['cells'])} cells",
             f"primes checked: {d['candidate_primes']}"]
    for p, v in d["verdicts"].items():
        extra = f" ({v['reason']})" if "reason" in v else ""
        lines.append(f"  p={p}: {v['status']}{extra}")
    lines.append(f"global: {d['global']}")
    return lines


def _grassmann(args):
    if args.input:
        weights = weights_from_dict(read_json_arg(args.input))
    else:
        w = args.w if args.w is not None else (1,) * args.n
        weights = WeightVector(args.d, args.n, w, args.r)
    report = grassmann_torsion_report(weights)
    payload = report.to_dict()
    if args.dot:
        payload["dot"] = young_lattice_dot(weights)
    return payload, report.certified


def _grassmann_text(d):
    w = d["weights"]
    lines = [f"wGr({w['d']},{w['n']}) weights {tuple(w['w'])} r={w['r']}: "
             f"{len(d['cells'])} Schubert cells"]
    for c in d["cells"]:
        lines.append(f"  alpha={tuple(c['alpha'])} dim {c['dim']} |G|={c['order']}")
    for p, v in d["verdicts"].items():
        lines.append(f"  p={p}: {v['status']}")
    lines.append(f"inconclusive primes: {d['inconclusive']}")
    lines.append(f"global: {d['global']}")
    if "dot" in d:
        lines.append(d["dot"].rstrip("\n"))
    return lines


def _present(args):
    pair = pair_from_dict(read_json_arg(args.input))
    report = per_prime_verdict(pair, node_budget=args.node_budget)
    try:
        data = emit_presentation(pair, report)
    except PresentationRefused as exc:
        return exc.to_dict(), False
    out = data.to_dict()
    out["text"] = data.render()
    return out, True


def _present_text(d):
    if d["status"] == "refused":
        return [f"refused: {d['reason']}"]
    return [d["text"].rstrip("\n")]


HANDLERS = {
    "analyze-toric": (_analyze_toric, _analyze_toric_text),
    "retract": (_retract, _retract_text),
    "qcw": (_qcw, _qcw_text),
    "grassmann": (_grassmann, _grassmann_text),
    "present": (_present, _present_text),
}


def execute(inv: Invocation, out=None) -> int:
    out = out or sys.stdout
    run, text = HANDLERS[inv.command]
    try:
        payload, ok = run(inv.args)
    except INPUT_ERRORS as exc:
        return _fail(inv.fmt, str(exc), out)
    if inv.fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(text(payload)) + "\n")
    return 0 if ok else 1


def _fail(fmt, message, out) -> int:
    if fmt == "json":
        out.write(json.dumps({"error": message}, sort_keys=True) + "\n")
    else:
        print(f"error: {message}", file=sys.stderr)
    return 2


def main(argv: Optional[list] = None) -> int:
    try:
        inv = parse_invocation(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return execute(inv)


if __name__ == "__main__":
    sys.exit(main())
