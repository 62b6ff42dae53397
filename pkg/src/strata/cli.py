"""Command line front end: ``strata <command> ...``.

Every command prints one JSON object (or ``key: value`` lines with --text).
Exit status is 0 on success, 1 on invalid input (including a relation file
that does not verify) and 2 when the bounds machinery contradicts itself.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import jsonschema

from . import schemas
from .bounds import Inconsistent, bracket
from .exactalg import format_rational
from .orbits import classify_index, find_common_radical_relation, orbit_matrix, orbit_rank, parking_search
from .partitions import Partition, partitions_of
from .relations import (
    CertificateLibrary,
    SecantRelation,
    classical_two_two,
    construct_adjacent_unit_jumps,
    construct_separated_unit_jumps,
    default_library,
    octic_annihilates_fourth_root,
    printed_quartic_cubic_relation,
    rational_normal_relation,
    solve_two_part_quartic_cubic,
    verify_paper_53,
    verify_relation,
)


class UsageError(Exception):
    def __init__(self, message, command=None):
        super().__init__(message)
        self.command = command


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}", self.prog.split()[-1])


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _root(text: str):
    text = text.strip().lower()
    if text in ("inf", "oo", "infinity"):
        return None
    try:
        return Fraction(text)
    except ValueError:
        raise UsageError(f"bad root {text!r}: use rationals like 1/2 or 'inf'")


def _provenances(rels) -> list[str]:
    return [f"{rel.mu.short()}: {rel.provenance or 'unnamed'}" for rel in rels if rel is not None]


# --- commands -----------------------------------------------------------------

def cmd_bounds(args):
    br = bracket(args.partition, default_library(args.certs))
    out = {"mu": args.partition.to_json(), **br.to_json()}
    return out, [br.upper_cert] if br.upper_cert.startswith("R5") else []


def cmd_classify(args):
    cls = classify_index(args.partition, budget=args.budget, seed=args.seed)
    out = {"mu": args.partition.to_json(), "verdict": cls.verdict, "rule": cls.rule}
    if cls.certificate is not None:
        out["certificate"] = cls.certificate.to_json()
    if cls.report:
        out["details"] = cls.report
    return out, _provenances([cls.certificate])


def cmd_verify(args):
    try:
        with open(args.file) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}")
    items = obj["certificates"] if isinstance(obj, dict) and "certificates" in obj else obj
    if isinstance(items, dict):
        items = [items]
    results = []
    rels = []
    for item in items:
        schemas.validate_relation(item)
        rel = SecantRelation.from_json(item)
        ok, diag = verify_relation(rel)
        rels.append(rel)
        results.append({"mu": rel.mu.to_json(), "length": len(rel), "ok": ok, "diagnostic": diag})
    return {"ok": all(r["ok"] for r in results), "relations": results}, _provenances(rels)


def _check(rel: SecantRelation):
    return verify_relation(rel)


def _check_53():
    res = verify_paper_53()
    return res.is_zero, "zero residual" if res.is_zero else "nonzero residual"


def _check_octic():
    val = octic_annihilates_fourth_root()
    return val == 0, "3c^8 - c^4 + 3 = 0" if val == 0 else f"value {val}"


EXAMPLES = [
    ("two-two", "classical 3-term relation for (2,2) over Q(i)", True, lambda: _check(classical_two_two())),
    ("quartic-cubic", "4-term relation for (4,3) over Q(sqrt 3), constants re-derived", True,
     lambda: _check(solve_two_part_quartic_cubic())),
    ("quartic-cubic-printed", "(4,3) relation with the constants a=3-sqrt3, b=3+sqrt3 substituted", False,
     lambda: _check(printed_quartic_cubic_relation())),
    ("quintic-cubic", "53-term identity for (5,3) in Q[z]/(3z^8-z^4+3)", True, _check_53),
    ("octic", "c^4=(1+i sqrt35)/6 satisfies 3c^8-c^4+3=0", True, _check_octic),
    ("adjacent-unit-jumps", "(3,2,1) relation at roots 0,1,2", True,
     lambda: _check(construct_adjacent_unit_jumps(1, 0, 1, 2))),
    ("separated-unit-jumps", "(2,1,2,1) relation at roots 0,1,2,3", True,
     lambda: _check(construct_separated_unit_jumps(1, 1, 0, 1, 2, 3))),
    ("rational-normal", "(4): six fourth powers of linear forms are dependent", True,
     lambda: _check(rational_normal_relation(4))),
]


def cmd_examples(args):
    rows = []
    for name, desc, expected, fn in EXAMPLES:
        row = {"name": name, "description": desc, "expected": expected}
        if args.run:
            t0 = time.perf_counter()
            ok, diag = fn()
            row.update(ok=bool(ok), diagnostic=diag, seconds=time.perf_counter() - t0)
        rows.append(row)
    return {"examples": rows}, []


def cmd_orbit_rank(args):
    roots = [_root(t) for t in args.roots.split(",")]
    om = orbit_matrix(args.partition, roots)
    rank = orbit_rank(om)
    out = {
        "mu": args.partition.to_json(),
        "roots": ["inf" if r is None else format_rational(r) for r in roots],
        "orbit_size": om.size,
        "rank": rank,
        "ambient": args.partition.d + 1,
    }
    used = []
    if rank < om.size:
        rel = find_common_radical_relation(args.partition, roots, args.len or om.size, args.budget)
        if rel is not None and verify_relation(rel)[0]:
            out["relation"] = rel.to_json()
            used.append(rel)
    return out, _provenances(used)


def cmd_parking(args):
    found = parking_search(args.partition, budget=args.budget)
    a, bound = found if found else (None, None)
    return {"mu": args.partition.to_json(), "a": list(a) if a else None, "bound": bound}, []


def cmd_numsearch(args):
    from .numsearch import exactify, search_relation

    res = search_relation(args.partition, args.len, budget=args.budget, seed=args.seed, accept_tol=args.tol,
                          pin_infinity=args.pin_infinity, time_limit=args.time_limit)
    cand = res.candidate
    out = {
        "mu": args.partition.to_json(),
        "length": args.len,
        "seed": args.seed,
        "found": cand is not None,
        "candidate": None if cand is None else cand.to_json(),
        "best": None if res.best is None else res.best.to_json(),
        "search": res.report,
    }
    used = []
    if cand is not None and not args.no_exactify:
        rel = exactify(cand)
        out["relation"] = None if rel is None else rel.to_json()
        if rel is not None:
            used.append(rel)
            if args.out:
                CertificateLibrary([rel]).save(args.out)
                out["relation_file"] = args.out
    return out, _provenances(used)


def cmd_table(args):
    lib = default_library(args.certs)
    rows = []
    for d in range(1, args.max_degree + 1):
        for mu in partitions_of(d):
            if mu.r < args.min_parts:
                continue
            rows.append({"mu": mu.to_json(), **bracket(mu, lib).to_json()})
    return {"rows": rows}, []


COMMANDS = {
    "bounds": cmd_bounds,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "examples": cmd_examples,
    "orbit-rank": cmd_orbit_rank,
    "parking": cmd_parking,
    "numsearch": cmd_numsearch,
    "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json",
                     help="print JSON (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="print key: value lines")
    common.add_argument("--certs", metavar="FILE", help="certificate library (default: $STRATA_CERTS)")

    parser = _Parser(prog="strata", description="Secant degeneracy index of strata of binary forms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", parents=[common], help="certified lower/upper bracket")
    p.add_argument("partition", type=_partition)

    p = sub.add_parser("classify", parents=[common], help="Growing / Stabilising / Unknown")
    p.add_argument("partition", type=_partition)
    p.add_argument("--budget", type=int, default=20, help="random root sets to try")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", parents=[common], help="verify a relation or certificate file")
    p.add_argument("file")

    p = sub.add_parser("examples", parents=[common], help="list (or --run) the built-in identities")
    p.add_argument("--run", action="store_true")

    p = sub.add_parser("orbit-rank", parents=[common], help="rank of the orbit matrix at given roots")
    p.add_argument("partition", type=_partition)
    p.add_argument("--roots", required=True, help="comma separated rationals, 'inf' allowed")
    p.add_argument("--len", type=int, default=None, help="longest relation to look for")
    p.add_argument("--budget", type=int, default=20_000)

    p = sub.add_parser("parking", parents=[common], help="best parking tuple and its bound")
    p.add_argument("partition", type=_partition)
    p.add_argument("--budget", type=int, default=1_000_000)

    p = sub.add_parser("numsearch", parents=[common], help="numerical search for a relation")
    p.add_argument("partition", type=_partition)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--budget", type=int, default=2000, help="random restarts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--pin-infinity", action="store_true", help="every term keeps one root at infinity")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--no-exactify", action="store_true")
    p.add_argument("--out", metavar="FILE", help="write the exact relation here")

    p = sub.add_parser("table", parents=[common], help="brackets for all partitions up to a degree")
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--min-parts", type=int, default=1)
    return parser


def _text(obj, prefix="") -> list[str]:
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict) and k != "certificate" and k != "relation":
            lines += _text(v, f"{prefix}{k}.")
        elif isinstance(v, (dict, list)) and len(json.dumps(v)) > 100:
            lines.append(f"{prefix}{k}: <{type(v).__name__} of {len(v)}>")
        else:
            lines.append(f"{prefix}{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}")
    return lines


def _emit(obj, fmt, stream):
    if fmt == "text":
        print("\n".join(_text(obj)), file=stream)
    else:
        print(json.dumps(obj, indent=1), file=stream)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    fmt = "text" if "--text" in argv else "json"
    try:
        args = parser.parse_args(argv)
        t0 = time.perf_counter()
        out, certs = COMMANDS[args.command](args)
        out["report"] = {
            "command": args.command,
            "inputs": {k: (v.to_json() if isinstance(v, Partition) else v)
                       for k, v in vars(args).items() if k not in ("fmt", "command")},
            "certificates": certs,
            "timing": time.perf_counter() - t0,
        }
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)}, fmt, sys.stderr)
        if exc.command in schemas.OUTPUT:
            print(json.dumps(schemas.OUTPUT[exc.command], indent=1), file=sys.stderr)
        return 1
    except Inconsistent as exc:
        _emit({"error": "inconsistent", "message": str(exc)}, fmt, sys.stderr)
        return 2
    except jsonschema.ValidationError as exc:
        _emit({"error": "invalid", "message": exc.message}, fmt, sys.stderr)
        return 1
    except (ValueError, ArithmeticError, KeyError, TypeError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, fmt, sys.stderr)
        return 1
    try:
        schemas.validate(args.command, out)
    except jsonschema.ValidationError as exc:
        _emit({"error": "bad output", "message": exc.message}, fmt, sys.stderr)
        return 2
    _emit(out, args.fmt, sys.stdout)
    if args.command == "verify" and not out["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
