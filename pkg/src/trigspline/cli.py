"""Command-line front end.

Every subcommand is a thin wrapper over library calls: read samples (or a
saved spline), build and modify a spline, and write a table. Tables are CSV
by default with ``#`` comment lines recording every parameter, or JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .errors import IncompatibilityError, MathError, ParseError, TrigSplineError
from .fourier import bessel_coefficients
from .grid import load_samples, save_samples, uniform_nodes
from .kernels import SeriesConfig, SplineParams, interp_factor_cos, interp_factor_sin
from .regularization import RegParams, regularize_spline, tau
from .smoothing import DEFAULT_FILTER, MultiplierFamily, modified_fejer, parse_weights, smooth_data, smooth_spline
from .spline import approximate_spline, build_spline, eval_spline, spline_derivative, spline_from_json, spline_to_json

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_MATH = 4
EXIT_IO = 5

EPILOG = """\
exit codes:
  0  success
  1  verification reported at least one failing check
  2  usage or validation error (bad flags, out-of-range values)
  3  malformed input (samples, spline document)
  4  numerical failure (series not converged, degenerate factor,
     nonconvergent derivative, incompatible grids)
  5  I/O error
"""


class UsageError(Exception):
    pass


def _triple(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return vals


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _fmt(v) -> str:
    return repr(float(v))


# --------------------------------------------------------------------------
# parser


def _add_io(p, samples=True):
    if samples:
        p.add_argument("-i", "--input", help="sample file (default: stdin)")
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="sample input format")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--output-format", choices=("csv", "json"), default="csv")


def _add_series(p):
    p.add_argument("--tolerance", type=float, default=1e-12, help="series truncation tolerance")
    p.add_argument("--max-terms", type=_positive_int, default=10**6, help="cap on explicitly summed levels")


def _add_params(p):
    p.add_argument("--r", type=_positive_int, default=1, help="smoothness order")
    p.add_argument("--gamma", type=_triple, default=(1.0, 1.0, 1.0), help="cosine weights g1,g2,g3")
    p.add_argument("--eta", type=_triple, default=(1.0, 1.0, 1.0), help="sine weights e1,e2,e3")
    p.add_argument("--I1", type=int, choices=(0, 1), default=0, help="stitching grid")
    p.add_argument("--I2", type=int, choices=(0, 1), default=None, help="interpolation grid (default: sample grid)")
    _add_series(p)


def _add_modifiers(p):
    p.add_argument("--m", type=int, default=None, help="truncation order")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="regularization parameter")
    p.add_argument("--p", type=int, default=None, help="regularization order (needs --lambda)")
    p.add_argument("--alpha", type=float, default=None, help="modified Fejer exponent")


def _add_eval(p):
    p.add_argument("--eval-points", type=_positive_int, default=256, help="dense grid size on [0, 2pi)")
    p.add_argument("--derivative", type=int, default=0, help="derivative order d (needs d < r)")
    p.add_argument("--spline-out", help="also write the spline as JSON to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigspline",
        description="Trigonometric interpolation splines on uniform periodic grids.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("coeffs", help="Bessel coefficients of the samples", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_io(p)

    helps = {
        "interpolate": "interpolating spline on a dense grid",
        "approximate": "least-squares spline of order --m",
        "regularize": "regularized spline (--lambda, --p)",
        "smooth": "spline smoothed by modified Fejer multipliers (--alpha)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        _add_io(p)
        _add_params(p)
        _add_modifiers(p)
        _add_eval(p)

    p = sub.add_parser("smooth-data", help="filter the samples with a circular convolution", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_io(p)
    p.add_argument("--weights", default=None, help="odd-length weights summing to 1 (default 1/4,1/2,1/4)")

    p = sub.add_parser("eval", help="evaluate a saved spline", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--spline", required=True, help="spline JSON written by --spline-out")
    _add_io(p, samples=False)
    _add_eval(p)

    p = sub.add_parser("factors", help="tables of tau weights, Fejer multipliers or interpolation factors",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--tau", action="store_true", help="regularization weights tau_k")
    which.add_argument("--fejer", action="store_true", help="modified Fejer multipliers")
    which.add_argument("--interp", action="store_true", help="interpolation factors hc_k, hs_k")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None, help="largest k for --tau")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--n", type=int, default=None, help="number of harmonics for --fejer")
    p.add_argument("--N", type=int, default=None, help="grid size for --interp")
    _add_params(p)
    _add_io(p, samples=False)

    p = sub.add_parser("verify", help="run the self-verification suite", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--series-tolerance", type=float, default=1e-12,
                   help="series tolerance used by the checks (raise it to see failures)")
    p.add_argument("-o", "--output", help="report file (default: stdout)")
    return parser


# --------------------------------------------------------------------------
# helpers


def _read_samples(args):
    if args.input is None:
        return load_samples(sys.stdin.buffer if hasattr(sys.stdin, "buffer") else sys.stdin, args.format)
    return load_samples(args.input, args.format)


def _write(args, text: str):
    if args.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _header(meta: dict) -> List[str]:
    lines = [f"# trigspline {__version__}"]
    for key, value in meta.items():
        if isinstance(value, (tuple, list)):
            value = ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            value = _fmt(value)
        lines.append(f"# {key}={value}")
    return lines


def _table(args, meta: dict, columns: Sequence[str], rows) -> str:
    rows = list(rows)
    if args.output_format == "json":
        doc = {"meta": meta, "columns": list(columns), "rows": [[_num(v) for v in row] for row in rows]}
        return json.dumps(doc) + "\n"
    out = _header(meta)
    out.append(",".join(columns))
    out += [",".join(str(v) if isinstance(v, (int, np.integer)) else _fmt(v) for v in row) for row in rows]
    return "\n".join(out) + "\n"


def _num(v):
    return int(v) if isinstance(v, (int, np.integer)) else float(v)


def _series_cfg(args) -> SeriesConfig:
    return SeriesConfig(tolerance=args.tolerance, max_terms=args.max_terms)


def _check_modifiers(args):
    if args.p is not None and args.lam is None:
        raise UsageError("--p needs --lambda")
    required = {"approximate": ("m", "--m"), "regularize": ("lam", "--lambda")}
    if args.command in required:
        attr, flag = required[args.command]
        if getattr(args, attr) is None:
            raise UsageError(f"{args.command} needs {flag}")
    if args.derivative < 0:
        raise UsageError("--derivative must be nonnegative")


def _spline_meta(s, args) -> dict:
    p = s.params
    meta = {
        "command": args.command,
        "N": p.N,
        "r": p.r,
        "gamma": p.gamma,
        "eta": p.eta,
        "I1": p.I1,
        "I2": p.I2,
        "tolerance": s.cfg.tolerance,
        "max_terms": s.cfg.max_terms,
        "m": s.order,
        "lambda": None if s.regularization is None else s.regularization.lam,
        "p": None if s.regularization is None else s.regularization.p,
        "alpha": getattr(args, "_alpha", None),
        "eval_points": args.eval_points,
        "derivative": args.derivative,
    }
    return {k: v for k, v in meta.items() if v is not None}


def _dense_table(args, s) -> str:
    x = uniform_nodes(args.eval_points, 0)
    if args.derivative:
        y = spline_derivative(s, args.derivative, x)
    else:
        y = eval_spline(s, x)
    return _table(args, _spline_meta(s, args), ("x", "value"), zip(x, y))


def _emit_spline(args, s):
    if args.spline_out:
        with open(args.spline_out, "w", encoding="utf-8") as fh:
            fh.write(spline_to_json(s) + "\n")
    _write(args, _dense_table(args, s))


# --------------------------------------------------------------------------
# commands


def cmd_coeffs(args):
    samples = _read_samples(args)
    spec = bessel_coefficients(samples)
    meta = {"command": "coeffs", "N": spec.N, "variant": spec.variant}
    rows = [(0, spec.a0, 0.0)] + [(k, spec.a[k - 1], spec.b[k - 1]) for k in range(1, spec.n + 1)]
    _write(args, _table(args, meta, ("k", "a", "b"), rows))


def cmd_spline(args):
    _check_modifiers(args)
    samples = _read_samples(args)
    I2 = samples.grid.variant if args.I2 is None else args.I2
    params = SplineParams(args.gamma, args.eta, args.r, samples.grid.N, args.I1, I2)
    s = build_spline(samples, params, _series_cfg(args))
    if args.m is not None:
        s = approximate_spline(s, args.m)
    if args.lam is not None:
        s = regularize_spline(s, RegParams(args.lam, 1 if args.p is None else args.p))
    alpha = args.alpha
    if alpha is None and args.command == "smooth":
        alpha = 1.0
    if alpha is not None:
        s = smooth_spline(s, MultiplierFamily(alpha, params.n))
    args._alpha = alpha
    _emit_spline(args, s)


def cmd_smooth_data(args):
    samples = _read_samples(args)
    kernel = DEFAULT_FILTER if args.weights is None else parse_weights(args.weights)
    out = smooth_data(samples, kernel)
    _write(args, save_samples(out, None, args.output_format))


def cmd_eval(args):
    if args.derivative < 0:
        raise UsageError("--derivative must be nonnegative")
    with open(args.spline, "r", encoding="utf-8") as fh:
        s = spline_from_json(fh.read())
    args._alpha = None
    _emit_spline(args, s)


def cmd_factors(args):
    if args.tau:
        if args.lam is None or args.kmax is None:
            raise UsageError("factors --tau needs --lambda and --kmax")
        if args.alpha is not None or args.n is not None or args.N is not None:
            raise UsageError("--alpha, --n and --N do not apply to --tau")
        reg = RegParams(args.lam, 1 if args.p is None else args.p)
        if args.kmax < 1:
            raise UsageError("--kmax must be positive")
        k = np.arange(1, args.kmax + 1)
        meta = {"command": "factors", "table": "tau", "lambda": reg.lam, "p": reg.p, "kmax": args.kmax}
        _write(args, _table(args, meta, ("k", "tau"), zip(k.tolist(), tau(k, reg))))
    elif args.fejer:
        if args.n is None:
            raise UsageError("factors --fejer needs --n")
        if args.lam is not None or args.p is not None or args.kmax is not None or args.N is not None:
            raise UsageError("--lambda, --p, --kmax and --N do not apply to --fejer")
        alpha = 1.0 if args.alpha is None else args.alpha
        k = np.arange(0, args.n + 1)
        meta = {"command": "factors", "table": "fejer", "alpha": alpha, "n": args.n}
        _write(args, _table(args, meta, ("k", "lambda"), zip(k.tolist(), modified_fejer(k, alpha, args.n))))
    else:
        if args.N is None:
            raise UsageError("factors --interp needs --N")
        if any(v is not None for v in (args.lam, args.p, args.kmax, args.alpha, args.n)):
            raise UsageError("--lambda, --p, --kmax, --alpha and --n do not apply to --interp")
        I2 = 0 if args.I2 is None else args.I2
        params = SplineParams(args.gamma, args.eta, args.r, args.N, args.I1, I2)
        cfg = _series_cfg(args)
        rows = [(k, interp_factor_cos(k, params, cfg), interp_factor_sin(k, params, cfg)) for k in range(1, params.n + 1)]
        meta = {"command": "factors", "table": "interp", "N": params.N, "r": params.r, "gamma": params.gamma,
                "eta": params.eta, "I1": params.I1, "I2": params.I2, "tolerance": cfg.tolerance}
        _write(args, _table(args, meta, ("k", "hc", "hs"), rows))


def cmd_verify(args):
    from .verification import run_verification

    results = run_verification(args.level, SeriesConfig(tolerance=args.series_tolerance))
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "coeffs": cmd_coeffs,
    "interpolate": cmd_spline,
    "approximate": cmd_spline,
    "regularize": cmd_spline,
    "smooth": cmd_spline,
    "smooth-data": cmd_smooth_data,
    "eval": cmd_eval,
    "factors": cmd_factors,
    "verify": cmd_verify,
}


def _fail(code: int, msg: str) -> int:
    sys.stderr.write(f"trigspline: error: {msg}\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = COMMANDS[args.command](args)
        for w in caught:
            sys.stderr.write(f"trigspline: warning: {w.message}\n")
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except ParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except (MathError, IncompatibilityError) as exc:
        return _fail(EXIT_MATH, str(exc))
    except TrigSplineError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, f"{exc.strerror or exc}: {exc.filename}" if exc.filename else str(exc))
    return EXIT_OK if code is None else code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
