"""Command-line entry point.

Examples::

    isoeof eof --d 3 --F 0.95
    isoeof curve --d 3 --points 1000 --out curve.csv
    isoeof rnm --d 3 --points 500
    isoeof verify-conjecture --d 5 --tol 1e-7
    isoeof twirl-mc --d 3 --mu 2/3,1/6,1/6 --samples 2000 --seed 7
    isoeof oracle --d 4 --F 0.8 --restarts 200
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import eof, hull, rcurve, states, twirl
from .core import SchmidtVector

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _records_output(header, rows, fmt):
    if fmt == "json":
        return to_json([dict(zip(header, row)) for row in rows])
    return to_csv(header, rows)


def _scalar_output(record: dict, fmt):
    if fmt == "csv":
        return to_csv(list(record), [list(record.values())])
    return to_json(record)


def _parse_mu(text: str) -> SchmidtVector:
    return SchmidtVector([float(Fraction(part.strip())) for part in text.split(",")])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoeof",
        description="Entanglement of formation for isotropic states (all entropies in bits).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, fmt_default):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--d", type=int, required=True, help="local dimension")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default=fmt_default)
        return p

    p = add("eof", "entanglement of formation at one F", "json")
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--numeric", action="store_true", help="use the sampled hull")
    p.add_argument("--points", type=int, default=hull.DEFAULT_GRID, help="hull grid size")

    p = add("curve", "R, closed-form E and numeric E on a grid over [0, 1]", "csv")
    p.add_argument("--points", type=int, default=201)

    p = add("rnm", "every R_nm branch on a grid over [1/d, 1]", "csv")
    p.add_argument("--points", type=int, default=201)

    p = add("verify-conjecture", "check the closed-form knee and slope for one d", "json")
    p.add_argument("--points", type=int, default=100_000, help="hull grid size")

    p = add("twirl-mc", "Monte Carlo U(x)U* twirl of a pure Schmidt state", "json")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--mu", help="comma-separated Schmidt coefficients, e.g. 2/3,1/6,1/6")
    p.add_argument("--F", type=float, help="twirl the isotropic state with this F instead")

    p = add("oracle", "brute-force minimum entropy at fixed F", "json")
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--restarts", type=int, default=200)
    return parser


def _validate(parser, args):
    def bad(flag, bound, value):
        parser.error(f"{flag} must be {bound} (got {value})")

    min_d = 3 if args.command == "verify-conjecture" else 2
    if args.d < min_d:
        bad("--d", f">= {min_d}", args.d)
    if args.tol <= 0:
        bad("--tol", "> 0", args.tol)
    F = getattr(args, "F", None)
    if F is not None:
        if args.command == "oracle" and not 1.0 / args.d <= F <= 1.0:
            bad("--F", f"in [1/d, 1] = [{1.0 / args.d:.12g}, 1]", F)
        if not 0.0 <= F <= 1.0:
            bad("--F", "in [0, 1]", F)
    points = getattr(args, "points", None)
    if points is not None:
        floor = 100 if args.command in ("verify-conjecture", "eof") else 2
        if points < floor:
            bad("--points", f">= {floor}", points)
    if getattr(args, "samples", 1) < 1:
        bad("--samples", ">= 1", args.samples)
    if getattr(args, "restarts", 1) < 1:
        bad("--restarts", ">= 1", args.restarts)
    if args.command == "twirl-mc":
        if args.mu is not None and args.F is not None:
            parser.error("--mu and --F are mutually exclusive")
        if args.mu is not None:
            try:
                mu = _parse_mu(args.mu)
            except (ValueError, ZeroDivisionError) as exc:
                parser.error(f"--mu is not a valid Schmidt vector: {exc}")
            if mu.dim != args.d:
                bad("--mu", f"of length --d = {args.d}", mu.dim)


def run(args) -> tuple[int, str]:
    """Execute a validated command; returns (exit code, serialized output)."""
    fmt = args.format
    if args.command == "eof":
        if args.numeric:
            res = eof.eof_isotropic_numeric(args.d, args.F, args.points)
        else:
            res = eof.eof_isotropic(args.d, args.F)
        return EXIT_OK, _scalar_output(res.as_dict(), fmt)

    if args.command == "curve":
        rows = eof.eof_curve(args.d, args.points)
        header = ["F", "R_bits", "E_analytic_bits", "E_numeric_bits"]
        return EXIT_OK, _records_output(header, rows, fmt)

    if args.command == "rnm":
        rows = rcurve.r_curve_csv_rows(args.d, args.points)
        return EXIT_OK, _records_output(["F", "n", "m", "R_bits"], rows, fmt)

    if args.command == "verify-conjecture":
        report = hull.verify_conjecture(args.d, args.tol, grid_points=args.points)
        code = EXIT_OK if report.passed else EXIT_FAIL
        return code, _scalar_output(report.as_dict(), fmt)

    if args.command == "twirl-mc":
        d = args.d
        if args.F is not None:
            rho = states.isotropic_density(states.IsotropicState(d, args.F))
        else:
            if args.mu is not None:
                mu = _parse_mu(args.mu)
            else:
                # Own stream: Haar samples use the 2-element seeds (seed, k).
                rng = np.random.default_rng((args.seed, 0, 1))
                mu = SchmidtVector(rng.dirichlet(np.ones(d)))
            rho = states.pure_state_from_schmidt(mu)
        rep = twirl.twirl_monte_carlo(rho, d, args.samples, args.seed)
        record = {
            "d": d,
            "samples": rep.samples,
            "seed": rep.seed,
            "frobenius_distance": rep.frobenius_distance,
            "standard_error": rep.standard_error,
            "estimated_F": rep.estimated_F,
            "exact_F": rep.exact_F,
        }
        return EXIT_OK, _scalar_output(record, fmt)

    if args.command == "oracle":
        val = rcurve.oracle_min_entropy(args.d, args.F, args.restarts, args.seed)
        branch = rcurve.r1(args.d, args.F)
        record = {
            "d": args.d,
            "F": args.F,
            "restarts": args.restarts,
            "seed": args.seed,
            "oracle_bits": val,
            "branch_bits": branch,
            "difference_bits": val - branch,
        }
        return EXIT_OK, _scalar_output(record, fmt)

    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        code, text = run(args)
    except ValueError as exc:
        print(f"isoeof: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
