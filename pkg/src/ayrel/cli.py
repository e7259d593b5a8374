"""Command-line front end: build fixtures, verify, render.

Exit codes: 0 all checks pass, 1 a check failed, 2 a budget was exhausted,
3 malformed input.  Reports are written even when checks fail, and
repeated runs produce byte-identical JSON/TSV.
"""

from __future__ import annotations

import argparse
import json
import sys

from ayrel.errors import AyrelError
from ayrel.field import ParseError, nf_parse


def _parse_rel_time(text):
    try:
        return nf_parse(text)
    except ParseError as err:
        print(f"error: cannot parse rel time {text!r}: {err}",
              file=sys.stderr)
        raise SystemExit(3)


def cmd_build(args):
    from ayrel.family import build_xr
    r = _parse_rel_time(args.r)
    ay = build_xr(r)
    payload = {
        "rel_time": str(r),
        "surface": ay.surface.to_json(),
        "provenance": list(ay.provenance),
    }
    with open(args.out, "w") as f:
        json.dump(payload, f, sort_keys=True, indent=1)
    print(f"wrote {args.out}: {ay.surface.num_triangles()} triangles "
          f"at rel time {r}")
    return 0


def cmd_verify(args):
    from ayrel.verify import run_suite
    try:
        report = run_suite(args.suite, scale=args.scale,
                           budget=args.budget)
    except AyrelError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    for check in report.checks:
        cid, _stmt, result, witness = check.row()
        print(f"{result:>4}  {cid}  {witness}")
    if args.out:
        with open(args.out, "w") as f:
            json.dump(report.to_json(), f, sort_keys=True, indent=1)
    if args.tsv:
        with open(args.tsv, "w") as f:
            f.write(report.to_tsv())
    print(f"suite {args.suite}: "
          f"{'pass' if report.passed else 'FAIL'}")
    return report.exit_code()


def cmd_svg(args):
    from ayrel.family import build_xr
    from ayrel.svg import render_svg
    r = _parse_rel_time(args.r)
    ay = build_xr(r)
    with open(args.out, "w") as f:
        f.write(render_svg(ay.surface, scale=args.scale))
    print(f"wrote {args.out}")
    return 0


def cmd_report(args):
    from ayrel.reporting import write_report_bundle
    summary = write_report_bundle(args.out, k_max=args.kmax,
                                  samples=args.samples,
                                  budget=args.budget)
    for name, info in sorted(summary.items()):
        print(f"{name}: {info}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ayrel",
        description="Exact computations on the rel deformation family of "
                    "the Arnoux-Yoccoz genus-3 surface")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="write a family surface as JSON")
    p_build.add_argument("--r", required=True,
                         help="rel time, e.g. '0', '3/2', 'a^3', '1 - a'")
    p_build.add_argument("-o", "--out", required=True)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", default="all",
                          choices=["holonomies", "cylinders", "renorm",
                                   "torus", "iet", "all"])
    p_verify.add_argument("--scale", type=float, default=1.0,
                          help="sample-count multiplier (1 = full)")
    p_verify.add_argument("--budget", type=int, default=10**6)
    p_verify.add_argument("-o", "--out", help="JSON report path")
    p_verify.add_argument("--tsv", help="TSV report path")
    p_verify.set_defaults(func=cmd_verify)

    p_svg = sub.add_parser("svg", help="render a family surface to SVG")
    p_svg.add_argument("--r", required=True)
    p_svg.add_argument("-o", "--out", required=True)
    p_svg.add_argument("--scale", type=int, default=160)
    p_svg.set_defaults(func=cmd_svg)

    p_report = sub.add_parser(
        "report", help="write TSV tables and figures to a directory")
    p_report.add_argument("-o", "--out", required=True)
    p_report.add_argument("--kmax", type=int, default=30)
    p_report.add_argument("--samples", type=int, default=8)
    p_report.add_argument("--budget", type=int, default=2 * 10**5)
    p_report.set_defaults(func=cmd_report)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
