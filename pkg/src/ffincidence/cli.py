"""``ffincidence`` command line: verification campaigns with JSON/CSV reports.

Exit codes: 0 when every assertion holds, 1 on a mathematical mismatch,
2 on a usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys

from . import commands
from .errors import FFIError
from .report import emit_report, report_passed
from .spectrum import DEFAULT_CHAR_BUDGET

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--budget", type=_positive, default=DEFAULT_CHAR_BUDGET,
                        help="cap on character evaluations")

    field = _Parser(add_help=False)
    field.add_argument("--p", type=int, required=True)
    field.add_argument("--ell", type=_positive, default=1)

    parser = _Parser(prog="ffincidence", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gauss", parents=[common, field], help="Gauss sum identities")
    g.add_argument("--square-limit", type=_nonneg, default=121,
                   help="check completing the square when q is at most this")

    s = sub.add_parser("spectrum", parents=[common, field], help="closed-form spectrum vs brute force")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--form", choices=("cone", "norm"), required=True)

    m = sub.add_parser("mixing", parents=[common, field], help="mixing bound on random vertex sets")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--form", choices=("cone", "norm"), required=True)
    m.add_argument("--trials", type=_nonneg, required=True)
    m.add_argument("--size", type=_nonneg, required=True)

    i = sub.add_parser("incidence", parents=[common, field], help="point-sphere incidence bounds")
    i.add_argument("--d", type=_positive, required=True)
    i.add_argument("--radius-class", choices=("square", "nonsquare", "arbitrary"), required=True)
    i.add_argument("--np", dest="n_points", type=_nonneg, required=True)
    i.add_argument("--ns", dest="n_spheres", type=_nonneg, required=True)
    i.add_argument("--trials", type=_nonneg, required=True)

    d = sub.add_parser("distance", parents=[common, field], help="distance-count upper bound")
    d.add_argument("--d", type=_positive, required=True)
    d.add_argument("--size", type=_nonneg, required=True)
    d.add_argument("--trials", type=_nonneg, required=True)

    sp = sub.add_parser("sumprod", parents=[common, field], help="sum-product experiment")
    sp.add_argument("--d", type=_positive, required=True)
    sp.add_argument("--sizeA", dest="size_a", type=_positive, required=True)
    sp.add_argument("--trials", type=_nonneg, required=True)
    sp.add_argument("--debug", action="store_true", help="also count lifted solutions")

    sub.add_parser("verify-all", parents=[common], help="run the whole verification matrix")
    return parser


def _dispatch(a: argparse.Namespace) -> dict:
    if a.command == "gauss":
        return commands.cmd_gauss(a.p, a.ell, a.square_limit)
    if a.command == "spectrum":
        return commands.cmd_spectrum(a.p, a.ell, a.k, a.form, workers=a.workers, budget=a.budget)
    if a.command == "mixing":
        return commands.cmd_mixing(a.p, a.ell, a.k, a.form, a.trials, a.size, a.seed, a.workers)
    if a.command == "incidence":
        return commands.cmd_incidence(a.p, a.ell, a.d, a.radius_class, a.n_points, a.n_spheres,
                                      a.trials, a.seed, a.workers)
    if a.command == "distance":
        return commands.cmd_distance(a.p, a.ell, a.d, a.size, a.trials, a.seed, a.workers)
    if a.command == "sumprod":
        return commands.cmd_sumprod(a.p, a.ell, a.d, a.size_a, a.trials, a.seed, a.debug)
    return commands.cmd_verify_all(a.budget, a.workers, a.seed)


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        report = _dispatch(args)
        emit_report(report, args.format, args.out)
    except (FFIError, OSError) as exc:
        print(f"ffincidence: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report_passed(report) else EXIT_MISMATCH


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
