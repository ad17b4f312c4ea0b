"""Command-line entry point: ``detmoments <subcommand> ...``.

JSON goes to stdout, logs to stderr.  Exit codes: 0 success, 1 verification
failure, 2 precision failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import os
import sys
import time
from contextlib import redirect_stdout
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import DetMomentsError, NoFit, PrecisionInsufficient, ToleranceNotMet
from .exact import as_rational, format_rational

log = logging.getLogger("detmoments")

EXIT_OK, EXIT_VERIFY, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 64

SCENARIOS = {
    "bures-2qubit": ("bures", Fraction(1)),
    "bures-2rebit": ("bures", Fraction(1, 2)),
    "bures": ("bures", None),
    "hs-2qubit": ("hs", Fraction(1)),
    "hs-2rebit": ("hs", Fraction(1, 2)),
    "hs": ("hs", None),
    "hs-qubit-qutrit": ("qq", Fraction(1)),
    "hs-rebit-retrit": ("qq", Fraction(1, 2)),
    "qq": ("qq", None),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def decimal_str(q: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(+(Decimal(q.numerator) / Decimal(q.denominator)))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_moment(args) -> int:
    from .formulas import (
        HALF,
        Scenario,
        bures_ratio_n1,
        bures_rebit_n2_ratio,
        det_moment,
        hs_ratio,
        qq_ratio_n1,
        trial_bures_ratio,
    )
    from .moments import Source, source_ratio

    kind, fixed_alpha = SCENARIOS[args.scenario]
    alpha = args.alpha if args.alpha is not None else fixed_alpha
    if alpha is None:
        raise UsageError(f"--alpha is required for scenario {args.scenario}")
    if fixed_alpha is not None and alpha != fixed_alpha:
        log.info("explicit alpha=%s overrides the scenario default %s", alpha, fixed_alpha)
    n, k = args.n, args.k
    if n < 0:
        raise UsageError("--n must be nonnegative")
    formula = args.formula
    if kind == "bures":
        scen = Scenario.bures(alpha)
        if formula == "auto":
            if n == 0:
                ratio, formula = Fraction(1), "trivial"
            elif n == 1 and alpha in (HALF, 1):
                ratio, formula = bures_ratio_n1(alpha, k), "closed-n1"
            elif n == 2 and alpha == HALF:
                ratio, formula = bures_rebit_n2_ratio(k, args.paper_literal), "closed-n2-rebit"
            else:
                raise UsageError(f"no closed Bures form for n={n}, alpha={format_rational(alpha)}; pick --formula")
        elif formula == "trial":
            ratio = trial_bures_ratio(alpha, n, k)
        elif formula in ("hybrid", "hybrid-summation"):
            src = Source.HYBRID_10F9 if formula == "hybrid" else Source.HYBRID_SUMMATION
            ratio = source_ratio(src, alpha, n, k)
        else:
            raise UsageError(f"formula {formula} does not apply to Bures")
    elif kind == "hs":
        scen = Scenario.hs(alpha)
        if formula not in ("auto", "hs"):
            raise UsageError(f"formula {formula} does not apply to HS")
        ratio, formula = hs_ratio(alpha, n, k), "hs-5F4"
    else:
        scen = Scenario.qubit_qutrit(alpha)
        if n == 0:
            ratio, formula = Fraction(1), "trivial"
        elif n == 1:
            ratio, formula = qq_ratio_n1(alpha, k), "closed-n1"
        else:
            raise UsageError("qubit-qutrit moments are available for n <= 1 only")
    out = {
        "scenario": args.scenario,
        "alpha": format_rational(alpha),
        "n": n,
        "k": format_rational(k),
        "formula": formula,
        "ratio": format_rational(ratio),
        "ratio_decimal": decimal_str(ratio, args.digits),
        "extrapolated": scen.extrapolated,
    }
    if k.denominator == 1 and k >= 0:
        moment = ratio * det_moment(scen, k)
        out["moment"] = format_rational(moment)
        out["moment_decimal"] = decimal_str(moment, args.digits)
    print(json.dumps(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        rep = run_suite(name, full=args.full, paper_literal=args.paper_literal)
        if args.verbose:
            for line in rep.lines():
                print(line)
        print(rep.summary())
        for note in rep.notes:
            print(f"  note: {note}")
        ok = ok and rep.passed
    return EXIT_OK if ok else EXIT_VERIFY


def _mode(args):
    from .moments import Mode

    return Mode.k_zero(args.eps) if args.mode == "k-zero" else Mode.balanced()


def cmd_sep_prob(args) -> int:
    from .inversion import separability_probability
    from .moments import Source

    est = separability_probability(
        Source(args.source),
        args.alpha,
        _mode(args),
        args.N,
        precision_bits=args.precision_bits,
        digits=args.digits,
        progress=lambda msg: log.info(msg),
    )
    rec = json.loads(est.to_json())
    rec["seconds"] = round(est.seconds, 3)
    print(json.dumps(rec))
    return EXIT_OK


def cmd_density(args) -> int:
    import numpy as np

    from .inversion import reconstruct, working_bits
    from .moments import Source, build_fixed_moments, build_moments

    mode = _mode(args)
    src = Source(args.source)
    bits = args.precision_bits
    if bits is None:
        bits = 0 if args.N <= 512 else working_bits(args.N)
    if bits == 0:
        d = reconstruct(build_moments(src, args.alpha, mode, args.N))
    else:
        d = reconstruct(build_fixed_moments(src, args.alpha, mode, args.N, bits))
    a, b = (float(x) for x in d.support)
    if args.points < 1:
        raise UsageError("--points must be positive")
    xs = np.linspace(a, b, args.points)
    fx = d.evaluate(xs)
    buf = io.StringIO()
    buf.write("x,fhat\n")
    for x, f in zip(xs, fx):
        buf.write(f"{x:.17g},{f:.17g}\n")
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(buf.getvalue())
        log.info("wrote %d rows to %s", args.points, args.output)
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _load_values(path: str):
    with open(path) as fh:
        data = json.load(fh)
    offset = 0
    if isinstance(data, dict):
        offset = int(data.get("offset", 0))
        data = data["values"]
    if isinstance(data, dict):
        return {int(i): as_rational(v) for i, v in data.items()}, 0
    return [as_rational(v) for v in data], offset


def cmd_fit(args) -> int:
    from .seqfit import auto_fit

    values, offset = _load_values(args.input)
    if args.offset is not None:
        offset = args.offset
    rf = auto_fit(values, args.max_degree, index_offset=offset)
    num, den = rf.integer_form()
    print(
        json.dumps(
            {
                "function": rf.format(args.var),
                "numerator": [str(c) for c in num.integer_coefficients()],
                "denominator": [str(c) for c in den.integer_coefficients()],
                "degrees": list(rf.degrees),
            }
        )
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    from . import oracle

    spec = oracle.QuadSpec(tol=args.tol, max_cells=args.max_cells)
    kind = args.integrand
    if kind == "normalization":
        res = oracle.normalization(args.alpha, spec)
    elif kind == "monomial":
        exps = [int(t) for t in args.exponents.split(",")]
        res = oracle.expect_monomial(exps, args.k, args.alpha, spec, args.convention)
    elif kind == "first-three":
        res = oracle.expect_first_three(args.k, spec)
    elif kind == "pt-squared":
        res = oracle.expect_pt_squared(args.k, spec)
    elif kind == "closed-term":
        q = oracle.closed_term(args.k)
        print(json.dumps({"integrand": kind, "k": args.k, "value": format_rational(q),
                          "decimal": decimal_str(q, args.digits)}))
        return EXIT_OK
    else:  # assemble
        first = oracle.expect_first_three(args.k, spec)
        val = oracle.assemble_n2(args.k, first.value)
        print(json.dumps({"integrand": "assemble", "k": args.k, "value": val,
                          "first_three": first.value, "est_error": first.est_error,
                          "cells": first.cells, "convention": first.convention}))
        return EXIT_OK
    print(res.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser, config file and manifest
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="detmoments", description="Exact determinantal moments and separability-probability estimates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="key=value file; command-line flags win")
    p.add_argument("--manifest", help="write a JSON run manifest to this path")
    p.add_argument("--threads", type=int, default=1, help="worker cap (recorded; computation is sequential)")
    p.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common_digits(sp):
        sp.add_argument("--digits", type=int, default=10, help="significant digits of decimal output")

    sp = sub.add_parser("moment", help="exact moment ratio for a scenario")
    sp.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    sp.add_argument("--alpha", type=_rational)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=_rational, default=Fraction(0))
    sp.add_argument("--formula", default="auto", choices=["auto", "hs", "trial", "hybrid", "hybrid-summation"])
    sp.add_argument("--paper-literal", action="store_true", help="use printed constants verbatim")
    common_digits(sp)
    sp.set_defaults(func=cmd_moment)

    sp = sub.add_parser("verify", help="run an exact-identity suite")
    sp.add_argument("--suite", required=True, choices=[
        "all", "corrigenda", "classical", "utility", "hybrid-10f9", "hybrid-8f7", "qq-hybrid", "8f12", "n2-rebit",
    ])
    sp.add_argument("--paper-literal", action="store_true")
    sp.add_argument("--full", action="store_true", help="extended k ranges")
    sp.add_argument("--verbose", action="store_true", help="print every record")
    sp.set_defaults(func=cmd_verify)

    def moment_source(sp, default_mode):
        sp.add_argument("--source", default="hybrid", choices=["hs", "trial", "hybrid", "hybrid-summation"])
        sp.add_argument("--alpha", type=_rational, required=True)
        sp.add_argument("--mode", default=default_mode, choices=["k-zero", "balanced"])
        sp.add_argument("--N", type=int, required=True)
        sp.add_argument("--precision-bits", type=int, default=None,
                        help="0 = exact; default exact for N <= 512, else max(4096, 8N)")
        sp.add_argument("--eps", type=_rational, default=Fraction(1, 10**20), help="k = 0 proxy")

    sp = sub.add_parser("sep-prob", help="separability-probability estimate")
    moment_source(sp, "k-zero")
    common_digits(sp)
    sp.set_defaults(func=cmd_sep_prob)

    sp = sub.add_parser("density", help="CSV dump of the reconstructed density")
    moment_source(sp, "k-zero")
    sp.add_argument("--points", type=int, default=1000)
    sp.add_argument("--output", default="-")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("fit", help="fit a rational function to exact values")
    sp.add_argument("--input", required=True, help="JSON list, or {offset, values}")
    sp.add_argument("--max-degree", type=int, default=12)
    sp.add_argument("--offset", type=int, default=None)
    sp.add_argument("--var", default="k")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("oracle", help="Bures spectral quadrature")
    sp.add_argument("--integrand", required=True,
                    choices=["normalization", "monomial", "first-three", "pt-squared", "closed-term", "assemble"])
    sp.add_argument("--alpha", type=_rational, default=Fraction(1, 2))
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--exponents", default="0,0,0,8")
    sp.add_argument("--convention", default=None, choices=["ordered", "unordered"])
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--max-cells", type=int, default=200_000)
    common_digits(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def _read_config(path: str) -> dict[str, str]:
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (t.strip() for t in line.split("=", 1))
            cfg[key.replace("-", "_")] = val
    return cfg


def _apply_config(parser: _Parser, argv: Sequence[str], cfg: dict[str, str]) -> None:
    """Install config values as subcommand defaults so explicit flags still win."""
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    cmd = next((t for t in argv if t in sub_action.choices), None)
    targets = [parser] + ([sub_action.choices[cmd]] if cmd else [])
    used = set()
    for sp in targets:
        defaults = {}
        for act in sp._actions:
            if act.dest in cfg:
                raw = cfg[act.dest]
                if isinstance(act, argparse._StoreTrueAction):
                    defaults[act.dest] = raw.lower() in ("1", "true", "yes", "on")
                elif act.type is not None:
                    try:
                        defaults[act.dest] = act.type(raw)
                    except (argparse.ArgumentTypeError, ValueError) as exc:
                        raise UsageError(f"config {act.dest}: {exc}") from exc
                else:
                    defaults[act.dest] = raw
                if act.required:
                    act.required = False
                used.add(act.dest)
        sp.set_defaults(**defaults)
    unknown = set(cfg) - used - {"config", "manifest"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    try:
        if known.config:
            _apply_config(parser, argv, _read_config(known.config))
    except (UsageError, OSError) as exc:
        print(f"detmoments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    # numeric libraries respect these caps
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(max(1, args.threads)))
    start = time.perf_counter()
    buf = io.StringIO()
    try:
        with redirect_stdout(buf):
            code = args.func(args)
    except UsageError as exc:
        print(f"detmoments: error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except PrecisionInsufficient as exc:
        print(f"detmoments: precision failure: {exc}", file=sys.stderr)
        code = EXIT_PRECISION
    except ToleranceNotMet as exc:
        print(f"detmoments: tolerance not met: {exc}", file=sys.stderr)
        code = EXIT_PRECISION
    except NoFit as exc:
        print(f"detmoments: no fit: {exc}", file=sys.stderr)
        code = EXIT_VERIFY
    except (DetMomentsError, ValueError, KeyError, OSError) as exc:
        print(f"detmoments: error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    out = buf.getvalue()
    sys.stdout.write(out)
    sys.stdout.flush()
    if args.manifest:
        manifest = {
            "command_line": ["detmoments"] + argv,
            "config": {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k != "func"},
            "precision_bits": _jsonable(getattr(args, "precision_bits", None)),
            "version": __version__,
            "duration_seconds": round(time.perf_counter() - start, 3),
            "exit_code": code,
            "output_sha256": hashlib.sha256(out.encode()).hexdigest(),
        }
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, indent=2)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
