"""Command-line interface: eval, ect, realize, simulate, certify.

Exit codes: 0 success, 1 tolerance or certification failure, 2 impossible
target, 64 usage error.  CSV goes to stdout (or --out) with full float
precision; JSON reports go to stdout, or to stderr when stdout carries CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings

import numpy as np

from .chebyshev import ect_table
from .closed_forms import melnikov_n3_coeffs, melnikov_n3_eval
from .coeffs import CoeffFile
from .designer import Configuration, realize_configuration
from .errors import MelnikovError, TargetImpossible
from .geometry import AnnulusTag, Family, SystemParams, annuli, annulus

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IMPOSSIBLE = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _params(args) -> SystemParams:
    family = Family(args.family)
    if family is Family.X210:
        return SystemParams.x210(args.b)
    if args.c is None:
        raise ValueError("X29 needs --c")
    return SystemParams.x29(args.b, args.c)


def _selected(params: SystemParams, tag: str | None):
    if tag is None or tag == "all":
        return annuli(params)
    return [annulus(params, AnnulusTag.parse(tag))]


def _load(args):
    cfile = CoeffFile.load(args.coeffs)
    params = cfile.params
    if getattr(args, "b", None) is not None:
        family = args.family or params.family.value
        c = args.c if args.c is not None else params.c
        params = SystemParams(Family(family), args.b, args.b if family == "X210" else c)
    return params, cfile.coeffs


def _writer(args):
    stream = open(args.out, "w", newline="") if getattr(args, "out", None) else sys.stdout
    return stream, csv.writer(stream)


def _fmt(v: float) -> str:
    return repr(float(v))


def cmd_eval(args) -> int:
    from .quadrature import oracle_melnikov

    params, coeffs = _load(args)
    closed = coeffs.n == 3
    stream, out = _writer(args)
    header = ["annulus", "h", "M_closed", "M_oracle", "abs_diff"] if closed else ["annulus", "h", "M_oracle"]
    out.writerow(header)
    worst = 0.0
    for ann in _selected(params, args.annulus):
        q = melnikov_n3_coeffs(params, coeffs, ann) if closed else None
        for h in ann.grid(args.grid):
            m_or = oracle_melnikov(params, coeffs, h)
            if closed:
                m_cl = float(melnikov_n3_eval(q, h))
                diff = abs(m_cl - m_or)
                worst = max(worst, diff)
                out.writerow([ann.tag.value, _fmt(h), _fmt(m_cl), _fmt(m_or), _fmt(diff)])
            else:
                out.writerow([ann.tag.value, _fmt(h), _fmt(m_or)])
    if stream is not sys.stdout:
        stream.close()
    if worst > args.tol:
        print(f"max abs_diff {worst!r} exceeds tolerance {args.tol!r}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_ect(args) -> int:
    params = _params(args)
    table = {tag: v.to_json() for tag, v in ect_table(params, args.grid).items()}
    print(json.dumps(table, indent=2))
    return EXIT_OK


def cmd_realize(args) -> int:
    params = SystemParams.x29(args.b, args.c)
    try:
        real = realize_configuration(params, Configuration(args.u, args.v))
    except TargetImpossible as exc:
        print(json.dumps({"status": "impossible", "message": str(exc),
                          "certificate": exc.certificate}, indent=2))
        return EXIT_IMPOSSIBLE
    if args.out:
        CoeffFile(params, real.coeffs).dump(args.out)
    report = real.report()
    report["status"] = "certified" if real.counts == (args.u, args.v) else "failed"
    report["coeff_file"] = args.out
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["status"] == "certified" else EXIT_FAIL


def cmd_simulate(args) -> int:
    from .ode import PerturbedField, displacement_grid
    from .quadrature import oracle_melnikov
    from .zeros import sign_changes_from_values

    params, coeffs = _load(args)
    pf = PerturbedField(params, coeffs, args.eps)
    stream, out = _writer(args)
    column = "displacement_over_eps" if args.eps > 0 else "displacement"
    out.writerow(["annulus", "h", column, "M_prediction"])
    summary = {"eps": args.eps, "annuli": {}}
    for ann in _selected(params, args.annulus):
        hs = ann.grid(args.grid)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            disp = displacement_grid(pf, ann, hs)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        if coeffs.n == 3:
            pred = melnikov_n3_eval(melnikov_n3_coeffs(params, coeffs, ann), hs)
        else:
            pred = np.array([oracle_melnikov(params, coeffs, h) for h in hs])
        for h, d, m in zip(hs, disp, pred):
            out.writerow([ann.tag.value, _fmt(h), _fmt(d), _fmt(m)])
        ok = np.isfinite(disp)
        brackets = [] if args.eps == 0 else list(sign_changes_from_values(hs[ok], disp[ok]).brackets)
        summary["annuli"][ann.tag.value] = {"brackets": brackets, "count": len(brackets),
                                            "failed_rows": int((~ok).sum())}
    if stream is not sys.stdout:
        stream.close()
    print(json.dumps(summary, indent=2), file=sys.stderr if stream is sys.stdout else sys.stdout)
    return EXIT_OK


def cmd_certify(args) -> int:
    from .certify import as_json, run_suite

    checks = run_suite(args.suite, seed=args.seed)
    report = {"suite": args.suite, "seed": args.seed,
              "passed": all(c.passed for c in checks), "checks": as_json(checks)}
    print(json.dumps(report, indent=2, default=_jsonable))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    return v


def _eps(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1e-2 or math.isnan(v):
        raise argparse.ArgumentTypeError("eps must lie in [0, 1e-2]")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lvmelnikov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def family_opts(p, required=True):
        p.add_argument("--family", choices=[f.value for f in Family],
                       default="X29" if required else None)
        p.add_argument("--b", type=float, required=required)
        p.add_argument("--c", type=float)

    p = sub.add_parser("eval", help="closed-form vs oracle M(h) on a grid (CSV)")
    family_opts(p, required=False)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--annulus", default="all")
    p.add_argument("--grid", type=_positive_int, default=50)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ect", help="ECT verdicts per annulus (JSON)")
    family_opts(p)
    p.add_argument("--grid", type=_positive_int, default=1000)
    p.set_defaults(func=cmd_ect)

    p = sub.add_parser("realize", help="certified (u, v) configuration for X29")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("simulate", help="return-map displacements (CSV) and cycle brackets")
    family_opts(p, required=False)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--annulus", default="all")
    p.add_argument("--grid", type=_positive_int, default=41)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("certify", help="run a certification suite (JSON)")
    p.add_argument("--suite", required=True,
                   choices=["closed-forms", "ect", "bounds", "configs", "ode"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        # bad parameters, tags or files: the invocation itself was wrong
        print(f"lvmelnikov: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MelnikovError as exc:
        print(f"lvmelnikov: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
