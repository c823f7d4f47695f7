"""Command-line front end.

Exit codes: 0 on success, 2 for invalid input, 3 for numerical failures.
Output is deterministic JSON ``{"meta": {...}, "result": ...}`` with sorted
keys and no timestamp, or CSV for spectra.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import warnings
from fractions import Fraction

from . import __version__
from .cross_section import Circle, Custom, FlatTorus, ProjectiveSpace, Sphere
from .errors import ConetraceError, NumericFailure, ValidationError
from .expansion import assemble_expansion
from .oracle import DEFAULT_GRID, compare_report, dirichlet_cone_spectrum, write_spectrum_csv
from .zeta import EXCLUDE, INCLUDE, ZetaContext, zeta_eval, zeta_laurent

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 2, 3

_ANGLE = re.compile(r"^\s*([+]?\d*\.?\d*(?:/\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$")


def parse_angle(text: str) -> float:
    """``"2pi"``, ``"0.75pi"``, ``"3/4pi"``, ``"pi/2"`` or a plain number."""
    m = _ANGLE.match(text.lower())
    if m:
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2):
            coef /= int(m.group(2))
        value = float(coef) * math.pi
    else:
        try:
            value = float(text)
        except ValueError:
            raise ValidationError(f"cannot parse angle {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"angle must be positive, got {text!r}")
    return value


def _threads() -> int:
    raw = os.environ.get("CONETRACE_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        raise ValidationError(f"CONETRACE_THREADS must be an integer, got {raw!r}") from None
    if k < 1:
        raise ValidationError("CONETRACE_THREADS must be >= 1")
    return k


def _model(args):
    kind = args.cross_section
    if kind == "circle":
        return Circle(parse_angle(args.angle))
    if kind in ("sphere", "projective"):
        if args.n is None:
            raise ValidationError(f"--n is required for {kind}")
        make = Sphere if kind == "sphere" else ProjectiveSpace
        return make(args.n, args.radius)
    if kind == "torus":
        if not args.lengths:
            raise ValidationError("--lengths is required for torus")
        return FlatTorus(*[float(x) for x in args.lengths.split(",")])
    if args.spectrum is None or args.n is None or args.vol is None:
        raise ValidationError("custom needs --spectrum, --n and --vol")
    return Custom(args.spectrum, args.n, args.vol, args.coefficients, args.scal)


def _add_model_args(p):
    p.add_argument("--cross-section", required=True,
                   choices=["circle", "sphere", "projective", "torus", "custom"])
    p.add_argument("--angle", default="2pi", help="circumference of the circle, e.g. 0.75pi")
    p.add_argument("--n", type=int, help="dimension of the cross-section")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--lengths", help="comma-separated torus side lengths")
    p.add_argument("--spectrum", help="CSV file with header lambda,multiplicity")
    p.add_argument("--coefficients", help="CSV file with header j,a_j")
    p.add_argument("--vol", type=float)
    p.add_argument("--scal", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conetrace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="heat-trace expansion coefficients of a cone")
    _add_model_args(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--no-direct", action="store_true", help="skip the direct constant term")
    p.add_argument("--b-tol", type=float, default=1e-6)
    p.add_argument("--out")

    p = sub.add_parser("zeta", help="Laurent data of the shifted spectral zeta function")
    _add_model_args(p)
    p.add_argument("--h", type=float, help="shift, default (n-1)/2")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--method", choices=["laurent", "eval"], default="laurent")
    p.add_argument("--zero-modes", choices=[EXCLUDE, INCLUDE], default=EXCLUDE)
    p.add_argument("--out")

    p = sub.add_parser("spectrum", help="Dirichlet spectrum of the unit cone")
    _add_model_args(p)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="constant term: formula, direct sum and oracle")
    p.add_argument("--angles", default="pi,2pi,4pi")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--tol", type=float, default=2e-3)
    p.add_argument("--t-min", type=float, default=DEFAULT_GRID[0])
    p.add_argument("--t-max", type=float, default=DEFAULT_GRID[1])
    p.add_argument("--count", type=int, default=DEFAULT_GRID[2])
    p.add_argument("--out")

    p = sub.add_parser("report", help="re-read a JSON result and print or re-emit it")
    p.add_argument("input")
    p.add_argument("--out")
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if v is not None}


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats, no NaN."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _run_coeffs(args):
    model = _model(args)
    return assemble_expansion(model, args.m, args.epsilon, with_direct=not args.no_direct,
                              b_tol=args.b_tol).to_dict()


def _run_zeta(args):
    model = _model(args)
    h = (model.n - 1) / 2 if args.h is None else args.h
    ctx = ZetaContext(model, h, args.zero_modes)
    if args.method == "eval":
        return {"point": args.s, "value": zeta_eval(ctx, args.s)}
    return zeta_laurent(ctx, args.s).to_dict()


def _run_verify(args):
    angles = [parse_angle(a) for a in args.angles.split(",") if a.strip()]
    grid = (args.t_min, args.t_max, args.count)
    return compare_report(angles, args.m, grid, tol_oracle=args.tol, workers=_threads())


def _run_report(args):
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {args.input}: {exc}") from None
    if not isinstance(doc, dict) or "meta" not in doc or "result" not in doc:
        raise ValidationError("not a conetrace result file")
    return doc


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    caught: list = []
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.command == "spectrum":
                spec = dirichlet_cone_spectrum(_model(args), args.lambda_max, _threads())
                if args.format == "csv":
                    _emit(write_spectrum_csv(spec), args.out)
                else:
                    modes = [{"nu": nu, "multiplicity": k, "zeros": z.tolist()}
                             for nu, k, z in spec.modes]
                    _emit(dumps({"meta": {"version": __version__, "config": _config(args)},
                                 "result": {"lambda_max": spec.lambda_max, "modes": modes}}),
                          args.out)
            elif args.command == "report":
                _emit(dumps(_run_report(args)), args.out)
            else:
                handler = {"coeffs": _run_coeffs, "zeta": _run_zeta, "verify": _run_verify}
                result = handler[args.command](args)
                _emit(dumps({"meta": {"version": __version__, "config": _config(args)},
                             "result": result}), args.out)
    except (ConetraceError, ArithmeticError) as exc:
        code = EXIT_NUMERIC if isinstance(exc, (NumericFailure, ArithmeticError)) else EXIT_VALIDATION
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return code
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    finally:
        for w in caught:
            print(json.dumps({"warning": w.category.__name__, "message": str(w.message)}),
                  file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
