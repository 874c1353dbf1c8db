"""Command-line front end.

Subcommands: constant, kernel, apply, report, verify, sweep.  Exit codes:
0 success (Finite constant, all checks passed), 1 invalid input, 2 divergent
constant, 3 verification failure.
"""

from __future__ import annotations

import argparse
import io
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import operator as op
from .errors import ConvergenceError, DomainError, KernelOverflowError, MeasureParseError, MeasureValidationError
from .measure import Atom, Measure, c_constant, c_constant_inf, lebesgue, parse_measure
from .spaces import INF, make_generator, parse_p
from .special_fn import OperatorParams, kernel, kernel_alt_forms
from .verification import CHECK_NAMES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_DIVERGENT, EXIT_VERIFY = 0, 1, 2, 3
OUTPUT_DIR_ENV = "GENHILBERT_OUTPUT_DIR"

logger = logging.getLogger(__name__)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with "divergent".
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    """17 significant digits, locale independent."""
    return "%.17g" % x


# ---------------------------------------------------------------- parsing helpers


def load_measure(spec: str) -> Measure:
    """``lebesgue``, ``atom:<t>[:<mass>]``, inline JSON, or a path to a JSON file."""
    if spec == "lebesgue":
        return lebesgue()
    if spec.startswith("atom:"):
        parts = spec.split(":")[1:]
        if len(parts) not in (1, 2):
            raise InputError(f"atom alias must be atom:<t>:<mass>, got {spec!r}")
        try:
            t = float(parts[0])
            mass = float(parts[1]) if len(parts) == 2 else 1.0
        except ValueError:
            raise InputError(f"atom alias has a non-numeric field: {spec!r}") from None
        return Measure([Atom(t, mass)], [])
    if spec.lstrip().startswith("{"):
        return parse_measure(spec)
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"measure file not found: {spec}")
    return parse_measure(path.read_bytes())


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _p_arg(text: str):
    try:
        return parse_p(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _params(args) -> OperatorParams:
    return OperatorParams(args.alpha, args.beta)


def read_sequence(path: str) -> np.ndarray:
    """One decimal per line; index = line number - 1."""
    values = []
    for i, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            raise InputError(f"{path}:{i}: empty line")
        try:
            values.append(float(line))
        except ValueError:
            raise InputError(f"{path}:{i}: not a number: {line!r}") from None
    if not values:
        raise InputError(f"{path}: no values")
    return np.array(values)


def _open_output(args):
    if not args.output:
        return sys.stdout, False
    path = Path(args.output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="", encoding="utf-8"), True


def _emit(args, text: str):
    stream, close = _open_output(args)
    try:
        stream.write(text)
    finally:
        if close:
            stream.close()


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(r) + "\n")
    return buf.getvalue()


def _result_text(res) -> str:
    return f"Finite {fmt(res.value)}" if res.is_finite else f"Divergent {res.endpoint.value}"


# ---------------------------------------------------------------- subcommands


def cmd_constant(args) -> int:
    measure = load_measure(args.measure)
    if args.p == INF:
        res = c_constant_inf(measure, args.beta)
    else:
        res = c_constant(measure, args.beta, args.p)
    if args.format == "csv":
        value = fmt(res.value) if res.is_finite else res.endpoint.value
        _emit(args, _csv(["kind", "param", "value"], [["finite" if res.is_finite else "divergent", fmt(args.beta), value]]))
    else:
        _emit(args, _result_text(res) + "\n")
    return EXIT_OK if res.is_finite else EXIT_DIVERGENT


def cmd_kernel(args) -> int:
    params = _params(args)
    if args.m < 0 or args.n < 0:
        raise InputError("m and n must be nonnegative")
    k = kernel(args.m, args.n, params)
    m_form, n_form = kernel_alt_forms(args.m, args.n, params)
    vals = [fmt(k), fmt(m_form), fmt(n_form)]
    if args.format == "csv":
        _emit(args, _csv(["kernel", "m_form", "n_form"], [vals]))
    else:
        _emit(args, ", ".join(vals) + "\n")
    return EXIT_OK


def cmd_apply(args) -> int:
    params = _params(args)
    measure = load_measure(args.measure)
    if (args.sequence is None) == (args.generator is None):
        raise InputError("give exactly one of --sequence or --generator")
    if args.sequence is not None:
        a = read_sequence(args.sequence)
        out = op.apply(params, measure, a, args.n_max)
        rows = [[str(n), fmt(v)] for n, v in enumerate(out)]
        header = ["n", "value"]
    else:
        p = 2.0 if args.p == INF else args.p
        gen = make_generator(args.generator, params, p, args.epsilon)
        enc = op.apply_tail_bounded(params, measure, gen, args.n_max, tol=args.tol, max_terms=args.max_terms)
        rows = [[str(n), fmt(lo), fmt(hi)] for n, (lo, hi) in enumerate(zip(enc.lo, enc.hi))]
        header = ["n", "lo", "hi"]
    if args.format == "csv":
        _emit(args, _csv(header, rows))
    else:
        _emit(args, _table([header, *rows]))
    return EXIT_OK


def _report_config(args) -> op.ReportConfig:
    cfg = op.ReportConfig()
    return op.ReportConfig(
        epsilons=tuple(args.epsilons) if args.epsilons else cfg.epsilons,
        truncations=tuple(args.truncations) if args.truncations else cfg.truncations,
        section_sizes=tuple(args.sections) if args.sections else cfg.section_sizes,
        tol=args.tol,
        max_terms=args.max_terms,
    )


def cmd_report(args) -> int:
    params = _params(args)
    measure = load_measure(args.measure)
    rep = op.norm_report(params, measure, args.p, _report_config(args))
    if args.format == "csv":
        rows = []
        if rep.constant.is_finite:
            rows.append(["constant", "finite", fmt(rep.constant.value)])
        else:
            rows.append(["constant", "divergent", rep.constant.endpoint.value])
        for lb in rep.lower_bounds:
            eps = "inf" if lb.epsilon is None else fmt(lb.epsilon)
            rows.append(["lower_bound", f"eps={eps};M={lb.truncation}", fmt(lb.ratio)])
        for N, v in rep.section_curve:
            rows.append(["section", str(N), fmt(v)])
        rows.append(["verdict", "", rep.verdict.value])
        _emit(args, _csv(["kind", "param", "value"], rows))
    else:
        best = rep.best_lower_bound
        lines = [
            ["constant", _result_text(rep.constant)],
            ["best lower bound", "none" if best is None else fmt(best)],
            ["verdict", rep.verdict.value],
        ]
        text = _table(lines)
        if rep.lower_bounds:
            text += "\nlower bounds\n" + _table(
                [["epsilon", "M", "ratio"]]
                + [["-" if lb.epsilon is None else fmt(lb.epsilon), str(lb.truncation), fmt(lb.ratio)] for lb in rep.lower_bounds]
            )
        if rep.section_curve:
            text += "\nsection curve\n" + _table([["N", "two_norm"]] + [[str(N), fmt(v)] for N, v in rep.section_curve])
        _emit(args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    only = []
    for item in args.only or []:
        only += [s for s in item.split(",") if s]
    unknown = [s for s in only if s not in CHECK_NAMES]
    if unknown:
        raise InputError(f"unknown check {unknown[0]!r}; expected one of {', '.join(CHECK_NAMES)}")
    results = run_suite(only or None, tol=args.tol)
    if args.format == "csv":
        rows = [[r.name, "true" if r.passed else "false", fmt(r.worst_residual), str(r.samples)] for r in results]
        _emit(args, _csv(["name", "passed", "worst_residual", "samples"], rows))
    else:
        rows = [["name", "passed", "worst_residual", "samples", "worst_input"]]
        rows += [[r.name, "yes" if r.passed else "NO", fmt(r.worst_residual), str(r.samples), r.worst_input] for r in results]
        _emit(args, _table(rows))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_sweep(args) -> int:
    params = _params(args)
    measure = load_measure(args.measure)
    if args.p == INF:
        raise InputError("sweep needs a finite p")
    rows = []
    if args.p == 2.0:
        for N in args.sections:
            rows.append(["section", str(N), fmt(op.two_norm_section(params, measure, None, N))])
    for lb in op.lower_bound_sweep(params, measure, args.p, args.epsilons, [args.truncation], tol=args.tol, max_terms=args.max_terms):
        rows.append(["lower_bound", fmt(lb.epsilon), fmt(lb.ratio)])
    _emit(args, _csv(["kind", "param", "value"], rows))
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genhilbert", description="Generalized Hilbert operators induced by measures.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, measure=True, p=True, fmt_default="table"):
        sp.add_argument("--alpha", type=float, default=0.0)
        sp.add_argument("--beta", type=float, default=0.0)
        if measure:
            sp.add_argument("--measure", default="lebesgue", help="lebesgue, atom:<t>:<mass>, inline JSON or a JSON file")
        if p:
            sp.add_argument("--p", type=_p_arg, default=2.0, help="exponent in [1, inf); 'inf' for the sup case")
        sp.add_argument("--format", choices=("table", "csv"), default=fmt_default)
        sp.add_argument("--output", help=f"output file (relative paths resolve against ${OUTPUT_DIR_ENV})")

    sp = sub.add_parser("constant", help="the norm constant C_mu(beta, p)")
    common(sp)
    sp.set_defaults(func=cmd_constant)

    sp = sub.add_parser("kernel", help="kernel value and its two binomial forms")
    common(sp, measure=False, p=False)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("apply", help="apply the operator to a sequence or generator")
    common(sp, fmt_default="csv")
    sp.add_argument("--sequence", help="CSV file, one value per line")
    sp.add_argument("--generator", help="extremal_lp, extremal_inf or unit_basis:<k>")
    sp.add_argument("--epsilon", type=float, default=None)
    sp.add_argument("--n-max", type=int, default=20)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-terms", type=int, default=op.DEFAULT_MAX_TERMS)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("report", help="constant, lower bounds and verdict")
    common(sp)
    sp.add_argument("--epsilons", type=_float_list)
    sp.add_argument("--truncations", type=_int_list)
    sp.add_argument("--sections", type=_int_list)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--max-terms", type=int, default=op.DEFAULT_MAX_TERMS)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("verify", help="run the numerical identity and inequality checks")
    sp.add_argument("--only", action="append", help=f"subset of: {', '.join(CHECK_NAMES)}")
    sp.add_argument("--tol", type=float, default=None, help="override every check's tolerance")
    sp.add_argument("--format", choices=("table", "csv"), default="csv")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="CSV of section norms and lower-bound ratios")
    common(sp, fmt_default="csv")
    sp.add_argument("--sections", type=_int_list, default=[2**k for k in range(1, 10)])
    sp.add_argument("--epsilons", type=_float_list, default=[0.2, 0.1, 0.05, 0.02])
    sp.add_argument("--truncation", type=int, default=1024)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--max-terms", type=int, default=op.DEFAULT_MAX_TERMS)
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (InputError, DomainError, MeasureParseError, MeasureValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KernelOverflowError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
