"""Command-line entry point.  Every command prints JSON.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 only undecided.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=False, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_coloring(path: str):
    from .dsets import Coloring

    try:
        return Coloring.from_text(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _cache(args):
    from .polysys import BasisCache

    return None if getattr(args, "no_cache", False) else BasisCache()


# ---------------------------------------------------------------------------
# commands


def cmd_dodeca(args) -> int:
    from .verify import run_claims

    if args.action == "verify":
        report = run_claims(only=["dodeca"], seed=args.seed)
        _emit(report, args.out)
        return EXIT_FAIL if report["summary"]["fail"] else EXIT_OK
    if args.action == "census":
        from .dodeca import subset_census

        c = subset_census(args.k)
        _emit({"k": c["k"], "total": c["total"], "counts": c["counts"], "four_iff_antipode_free": c["four_iff_antipode_free"]}, args.out)
        return EXIT_OK
    from .dodeca import burnside_116

    b = burnside_116()
    b.pop("fixed", None)
    _emit(b, args.out)
    return EXIT_OK if b["orbits"] == b["burnside"] else EXIT_FAIL


def cmd_bounds(args) -> int:
    from .bounds import bootstrap_f_table, exhaustive_f_oracle, replay_diameter20, verify_proof

    table = bootstrap_f_table()
    if args.action == "f":
        if args.n is None or not 0 <= args.n <= 20:
            raise UsageError("bounds f needs --n between 0 and 20")
        e = table.entry(args.n)
        data = {"lower": e.lower, "upper": e.upper, "witness": e.witness}
        if args.exhaustive:
            if args.n > 8:
                raise UsageError("--exhaustive supports n <= 8")
            data["exhaustive"] = exhaustive_f_oracle(args.n)
        _emit(data, args.out)
        if args.exhaustive and not e.lower <= data["exhaustive"] <= e.upper:
            return EXIT_FAIL
        return EXIT_OK
    log = replay_diameter20(table)
    ok, problems = verify_proof(log.to_json(), table)
    if args.emit_proof:
        Path(args.emit_proof).write_text(log.to_json())
    _emit({"conclusion": "alpha >= 8", "verdict": log.verdict, "reverified": ok, "problems": problems}, args.out)
    return EXIT_OK if ok and log.verdict else EXIT_FAIL


def cmd_coloring(args) -> int:
    from .dsets import canonical_coloring, is_weakly_quasi_representable

    if args.action == "canon":
        forms = {p: canonical_coloring(_load_coloring(p)).hex() for p in args.files}
        _emit({"canonical": forms, "all_equal": len(set(forms.values())) == 1}, args.out)
        return EXIT_OK
    results = {}
    code = EXIT_OK
    for p in args.files:
        v = is_weakly_quasi_representable(_load_coloring(p), d=args.dim, budget=args.budget, cache=_cache(args))
        results[p] = v.to_dict()
        if v.status == "budget" and code == EXIT_OK:
            code = EXIT_UNDECIDED
    _emit(results, args.out)
    return code


def cmd_extend(args) -> int:
    from .extend import ExtensionContext, Undecided, build_extension_graph, enumerate_border_vectors, omega_star, verify_dodeca_clique

    C = _load_coloring(args.coloring) if args.coloring else None
    if args.mode == "certificate":
        from .dsets import cube_coloring

        base = C or cube_coloring()
        cert = verify_dodeca_clique(base, ExtensionContext(base, cache=_cache(args)))
        _emit(cert.to_dict(), args.out)
        return EXIT_OK if cert.ok else EXIT_FAIL
    if C is None:
        raise UsageError("--mode full needs --coloring")
    ctx = ExtensionContext(C, budget=args.budget, cache=_cache(args))
    vectors = list(enumerate_border_vectors(C, ctx, limit=args.limit))
    GC = build_extension_graph(C, vectors, ctx)
    if args.dot:
        Path(args.dot).write_text(GC.to_dot())
    data = json.loads(GC.to_json())
    try:
        data["omega_star"] = omega_star(GC)
    except Undecided as exc:
        data["omega_star"] = None
        data["error"] = str(exc)
    _emit(data, args.out)
    return EXIT_UNDECIDED if GC.undecided else EXIT_OK


def cmd_verify_proof(args) -> int:
    from .bounds import verify_proof

    text = _read(args.file)
    try:
        ok, problems = verify_proof(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.file}: not a proof log ({exc})") from exc
    _emit({"ok": ok, "problems": problems}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(args) -> int:
    from .verify import GROUPS, CLAIMS, report_exit_code, run_claims

    only = args.only.split(",") if args.only else None
    if only:
        known = set(GROUPS) | {c.id for c in CLAIMS}
        bad = [o for o in only if o not in known]
        if bad:
            raise UsageError(f"unknown claim or group: {', '.join(bad)}")
    report = run_claims(only=only, seed=args.seed, cache=_cache(args), emit_proof=args.emit_proof, timings=args.timings)
    _emit(report, args.out)
    return report_exit_code(report)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--no-cache", action="store_true", help="ignore the Groebner cache")

    p = argparse.ArgumentParser(prog="fivedist", description="Five-distance sets in R^3: exact verification toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dodeca", parents=[common], help="dodecahedron scheme, census and orbit counts")
    d.add_argument("action", choices=["verify", "census", "burnside"])
    d.add_argument("--k", type=int, default=8, help="subset size for census")
    d.set_defaults(func=cmd_dodeca)

    b = sub.add_parser("bounds", parents=[common], help="f(n) table and the 20-point replay")
    b.add_argument("action", choices=["f", "diameter20"])
    b.add_argument("--n", type=int)
    b.add_argument("--exhaustive", action="store_true", help="also run the exhaustive oracle (n <= 8)")
    b.add_argument("--emit-proof", help="write the proof log to this file")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("coloring", parents=[common], help="representability check or canonical form")
    c.add_argument("action", choices=["check", "canon"])
    c.add_argument("files", nargs="+")
    c.add_argument("--dim", type=int, default=3)
    c.add_argument("--budget", type=int, default=2_000_000)
    c.set_defaults(func=cmd_coloring)

    e = sub.add_parser("extend", parents=[common], help="extension graph of an 8-point coloring")
    e.add_argument("--mode", choices=["certificate", "full"], default="certificate")
    e.add_argument("--coloring", help="coloring file (default: the cube)")
    e.add_argument("--budget", type=int, default=2_000_000)
    e.add_argument("--limit", type=int, help="stop full enumeration after this many vertices")
    e.add_argument("--dot", help="write the extension graph in DOT format")
    e.set_defaults(func=cmd_extend)

    v = sub.add_parser("verify-proof", parents=[common], help="re-check a stored proof log")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify_proof)

    a = sub.add_parser("verify-all", parents=[common], help="run every claim and print a report")
    a.add_argument("--only", help="comma-separated groups or claim ids")
    a.add_argument("--emit-proof", help="directory for proof logs")
    a.add_argument("--timings", action="store_true", help="include runtimes (breaks byte-reproducibility)")
    a.set_defaults(func=cmd_verify_all)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fivedist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
