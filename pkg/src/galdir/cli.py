"""Command-line entry point: analysis, construction, verification, and
open-problem search as reproducible batch commands.

Exit codes: 0 = all assertions passed (skips allowed), 1 = a verified
statement failed on an instance (counterexample serialized to stderr),
2 = usage or parse error.

All JSON output is exact: integers, or rationals as "num/den" strings; the
vertical direction is the token "inf".  Reports embed a run manifest
(command line, version, prime, seed, input digests).  Wall-clock timestamps
go to stderr only, so identical invocations yield byte-identical reports.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .analysis import (
    construct_extremal,
    construct_power_graph,
    exhaustive_verify,
    inequality_audit,
    verify_main_theorem,
    verify_small_set_directions,
)
from .errors import (
    InvariantViolation,
    LacunaryShapeError,
    OutOfTheoremRange,
    PointSetFormatError,
)
from .field import Prime
from .plane import (
    AffineMap,
    PointSet,
    determined_directions,
    direction_label,
    plane_stats,
)
from .redei import (
    check_derivative_divisibility,
    check_nonrich_specialization,
    lacunary_coefficient_bounds,
    recover_rich_lines,
    rs_bundle,
    verify_blackbox,
)
from .search import dump_report, search_open_problem

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _exact(value):
    """JSON encoding of an exact number: int, or 'num/den' for rationals."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return int(value)


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(args, prime=None, seed=None, inputs=()):
    return {
        "command": " ".join(["galdir"] + args),
        "version": __version__,
        "prime": prime.p if prime is not None else None,
        "seed": seed,
        "input_digests": {path: _digest(path) for path in inputs},
    }


def _emit_json(payload, out=None):
    (out or sys.stdout).write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _line_str(p, line):
    d, k = line
    return f"(slope {direction_label(p, d)}, intercept {k})"


# -- analyze --------------------------------------------------------------


def cmd_analyze(args, argv):
    U = PointSet.load(args.input)
    prime = U.prime
    p = prime.p
    stats = plane_stats(U)
    from .plane import is_covered_by_n_lines

    cover = is_covered_by_n_lines(U, U.n)
    if args.json:
        payload = {
            "p": p,
            "N": U.N,
            "n": U.n,
            "r": U.r,
            "theta": _exact(U.theta),
            "D": stats.special_count,
            "E": stats.rich_count,
            "W": stats.rich_line_count,
            "Z": stats.rich_point_total,
            "Q": stats.rich_line_sq,
            "directions": [
                {
                    "direction": direction_label(p, pr.direction),
                    "classification": pr.classification,
                    "histogram": list(pr.histogram),
                    "pair_count": pr.pair_count,
                    "rich_line_count": pr.rich_line_count,
                }
                for pr in stats.profiles
            ],
            "determined_directions": [
                direction_label(p, d) for d in determined_directions(U)
            ]
            if U.N >= 2
            else [],
            "covered_by_n_lines": cover is not None,
            "cover": [[direction_label(p, d), k] for d, k in cover]
            if cover is not None
            else None,
            "manifest": _manifest(argv, prime, inputs=[args.input]),
        }
        _emit_json(payload)
    else:
        print(f"p = {p}  N = {U.N}  n = {U.n}  r = {U.r}  theta = {U.theta}")
        print(
            f"D = {stats.special_count} special, E = {stats.rich_count} rich, "
            f"W = {stats.rich_line_count} rich lines, "
            f"Z = {stats.rich_point_total}, Q = {stats.rich_line_sq}"
        )
        print("direction  class    histogram" + " " * 12 + "c_m  w_m")
        for pr in stats.profiles:
            label = direction_label(p, pr.direction)
            hist = ",".join(str(v) for v in pr.histogram)
            print(
                f"{label:>9}  {pr.classification:<7}  {hist:<20} "
                f"{pr.pair_count:>4} {pr.rich_line_count:>4}"
            )
        if U.N >= 2:
            dets = ", ".join(direction_label(p, d) for d in determined_directions(U))
            print(f"determined directions: {dets}")
        if cover is not None:
            lines = ", ".join(_line_str(p, line) for line in cover)
            print(f"covered by {U.n} lines: {lines}")
        else:
            print(f"not covered by {U.n} lines")
    return EXIT_OK


# -- construct ------------------------------------------------------------


def cmd_construct(args, argv):
    prime = Prime(args.prime)
    if args.kind == "redei":
        U = construct_power_graph(prime, args.variant)
    else:
        if args.n is None:
            raise ValueError("construct extremal requires -n")
        U = construct_extremal(prime, args.n, args.variant)
    stats = plane_stats(U)
    det = len(determined_directions(U)) if U.N >= 2 else 0
    if args.output:
        U.save(args.output)
        print(f"wrote {U.N} points to {args.output}")
    else:
        sys.stdout.write(U.dump())
    print(
        f"determined directions: {det}; special: {stats.special_count} "
        f"(variant {args.variant}, (p+3)/2 = {(prime.p + 3) // 2})"
    )
    return EXIT_OK


# -- verify ---------------------------------------------------------------


def _verify_theorem(U, args, results):
    verdict = verify_main_theorem(U)
    results.append(
        (
            "theorem_dichotomy",
            "pass" if verdict.dichotomy_holds else "fail",
            f"D = {verdict.special_count}, bound = {verdict.bound}, "
            f"covered = {verdict.covered_by_n_lines}",
        )
    )


def _verify_rs(U, args, results):
    verdict = verify_small_set_directions(U)
    detail = (
        "collinear"
        if verdict.collinear
        else f"{verdict.determined_count} directions >= bound {verdict.bound}"
    )
    results.append(("small_set_directions", "pass" if verdict.holds else "fail", detail))


def _verify_polynomial(U, args, results):
    stats = plane_stats(U)
    bundle = rs_bundle(U, U.n)
    results.append(("bundle_identity", "pass", f"deg H = {bundle.H.x_degree}"))
    slopes = [args.m] if args.m is not None else list(range(U.prime.p))
    for m in slopes:
        try:
            ok = check_nonrich_specialization(bundle, m, stats)
            results.append(
                (
                    f"specialization_m={m}",
                    "pass" if ok else "fail",
                    "(x^p-x)^n at non-rich slope",
                )
            )
        except OutOfTheoremRange as exc:
            results.append((f"specialization_m={m}", "skipped", str(exc)))
        for order in range(1, U.n + 1):
            try:
                ok = check_derivative_divisibility(bundle, m, order, stats)
                results.append(
                    (
                        f"derivative_m={m}_order={order}",
                        "pass" if ok else "fail",
                        f"(x^p-x)^{U.n - order} divides",
                    )
                )
            except OutOfTheoremRange as exc:
                results.append(
                    (f"derivative_m={m}_order={order}", "skipped", str(exc))
                )
    report = lacunary_coefficient_bounds(bundle, stats)
    results.append(
        (
            "lacunary_degree_bounds",
            "pass" if report.all_ok else "fail",
            "; ".join(
                f"block {row.block}: deg {row.degree} <= {row.bound}"
                for row in report.rows
            ),
        )
    )


def _verify_blackbox(U, args, results):
    prime = U.prime
    stats = plane_stats(U)
    rich = stats.rich_directions()
    if args.m is not None:
        rich = [d for d in rich if d == args.m] or [args.m]
    if not rich:
        results.append(("blackbox", "skipped", "no rich directions"))
        return
    for d in rich:
        name = f"blackbox_d={direction_label(prime.p, d)}"
        try:
            verify_blackbox(U, d, stats=stats)
            results.append((name, "pass", "all four conclusions hold"))
        except OutOfTheoremRange as exc:
            results.append((name, "skipped", f"hypotheses unmet: {exc}"))


def _verify_audit(U, args, results):
    audit = inequality_audit(U)
    for rec in audit.records:
        if rec.hypotheses_met:
            status = "pass" if rec.holds else "fail"
        else:
            status = "reported"
        results.append(
            (
                f"ineq_{rec.name}",
                status,
                f"{rec.lhs} {rec.relation} {rec.rhs}"
                + ("" if rec.holds else " (does not hold)"),
            )
        )


def cmd_verify(args, argv):
    results = []  # (name, status in {pass, fail, skipped, reported}, detail)
    if args.scope == "exhaustive":
        if args.prime is None:
            raise ValueError("verify exhaustive requires -p")
        summary = exhaustive_verify(Prime(args.prime))
        results.append(("exhaustive", "pass", str(summary)))
        U = None
    else:
        if args.input is None:
            raise ValueError(f"verify {args.scope} requires a point-set file")
        U = PointSet.load(args.input)
        handler = {
            "theorem": _verify_theorem,
            "rs": _verify_rs,
            "polynomial": _verify_polynomial,
            "blackbox": _verify_blackbox,
            "audit": _verify_audit,
        }[args.scope]
        handler(U, args, results)
    failed = [rec for rec in results if rec[1] == "fail"]
    if args.json:
        payload = {
            "scope": args.scope,
            "results": [
                {"check": name, "status": status, "detail": detail}
                for name, status, detail in results
            ],
            "failures": len(failed),
            "manifest": _manifest(
                argv,
                U.prime if U is not None else Prime(args.prime),
                inputs=[args.input] if args.input else [],
            ),
        }
        _emit_json(payload)
    else:
        for name, status, detail in results:
            print(f"{status:>8}  {name}: {detail}")
    if failed:
        if U is not None:
            sys.stderr.write("counterexample point set:\n" + U.dump())
        return EXIT_FAILURE
    return EXIT_OK


# -- search ---------------------------------------------------------------


def cmd_search(args, argv):
    prime = Prime(args.prime)
    mode = "exhaustive" if args.exhaustive else "sample"
    t0 = time.time()
    report = search_open_problem(
        prime,
        mode,
        samples=args.samples,
        seed=args.seed,
        long_run=args.long_run,
        threads=args.threads,
        checkpoint_path=args.checkpoint,
    )
    elapsed = time.time() - t0
    # canonical command: worker count, output path, and checkpoint file do
    # not affect the result, so they stay out of the manifest and the report
    # is byte-identical across those variations
    if mode == "exhaustive":
        canonical = ["search", "-p", str(prime.p), "--exhaustive"]
        if args.long_run:
            canonical.append("--long-run")
    else:
        canonical = [
            "search", "-p", str(prime.p),
            "--samples", str(args.samples), "--seed", str(args.seed),
        ]
    report["manifest"] = _manifest(
        canonical, prime, seed=args.seed if mode == "sample" else None
    )
    text = dump_report(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        sys.stderr.write(
            f"wrote {args.output}: {len(report['classes'])} classes, "
            f"{len(report['failures'])} failures in {elapsed:.1f}s\n"
        )
    else:
        sys.stdout.write(text)
    if report["failures"]:
        sys.stderr.write("bound failures found (would falsify the theorem)\n")
        return EXIT_FAILURE
    return EXIT_OK


# -- argument parsing -----------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="galdir",
        description="Exact direction analysis of point sets in the affine "
        "plane over F_p.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="direction profile of a point-set file")
    pa.add_argument("input", help="point-set file ('p <prime>' header)")
    pa.add_argument("--json", action="store_true")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("construct", help="write an extremal example")
    pc.add_argument("kind", choices=["redei", "extremal"])
    pc.add_argument("-p", "--prime", type=int, required=True)
    pc.add_argument("-n", type=int, default=None, help="number of full lines")
    pc.add_argument("--variant", choices=["plus", "minus"], default="plus")
    pc.add_argument("-o", "--output", default=None)
    pc.set_defaults(func=cmd_construct)

    pv = sub.add_parser("verify", help="run checkers against a file or prime")
    pv.add_argument(
        "scope",
        choices=["theorem", "rs", "polynomial", "blackbox", "audit", "exhaustive"],
    )
    pv.add_argument("input", nargs="?", default=None, help="point-set file")
    pv.add_argument("-p", "--prime", type=int, default=None)
    pv.add_argument("--m", type=int, default=None, help="restrict to one slope")
    pv.add_argument("--json", action="store_true")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("search", help="per-(n,r) minimum special directions")
    ps.add_argument("-p", "--prime", type=int, required=True)
    ps.add_argument("--samples", type=int, default=100000)
    ps.add_argument("--seed", type=int, default=42)
    ps.add_argument("--exhaustive", action="store_true")
    ps.add_argument("--long-run", action="store_true")
    ps.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("GALDIR_THREADS", "1")),
    )
    ps.add_argument("--checkpoint", default=None, help="resumable state file")
    ps.add_argument("-o", "--output", default=None)
    ps.set_defaults(func=cmd_search)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except PointSetFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (InvariantViolation, LacunaryShapeError) as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
