"""Command line front end.

Exit codes: 0 success, 1 usage or input error, 2 mathematical rejection or
exhausted retry budget.

Bounds JSON is a list of rows ``{"d", "lower", "upper", "conjecture",
"known_exact", "note"}``; certificates are embedded in DecompositionFiles
with the fields of :class:`~ternary_waring.certify.Certificate`.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from .binary import sylvester_min_decompose
from .certify import (CertificationFailed, Reject, bounds_table, format_bounds_table,
                      verify_decomposition)
from .decomposer import DecomposerConfig, decompose_ternary
from .errors import (GenericChoiceFailed, InvariantViolation, PowerInput,
                     PreconditionViolated, RetryBudgetExhausted, ZeroForm)
from .forms import Form, num_monomials
from .io import (FormatError, decomposition_from_json, decomposition_to_json, dumps,
                 form_hash, form_to_json, read_form, read_json)
from .linalg import as_exact, rng_stream
from .validation import check_form, check_seed

EXIT_OK, EXIT_INPUT, EXIT_REJECT = 0, 1, 2

INPUT_ERRORS = (FormatError, OSError, PreconditionViolated, ZeroForm, PowerInput,
                TypeError, ValueError)
MATH_ERRORS = (CertificationFailed, RetryBudgetExhausted, GenericChoiceFailed,
               InvariantViolation)

log = logging.getLogger("ternary_waring")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# --- decompose ------------------------------------------------------------

def _decompose_one(path: str, seed: int, tol: float, retry_lines: int, retry_h: int,
                   absorb: bool) -> tuple[int, str, str]:
    """Returns ``(exit code, file text, summary line)``; safe to run in a worker."""
    try:
        f = check_form(read_form(path), nvars=3)
    except INPUT_ERRORS as exc:
        return EXIT_INPUT, "", f"{path}: {exc}"
    cfg = DecomposerConfig(retry_lines=retry_lines, retry_h=retry_h)
    try:
        r = decompose_ternary(f, seed=seed, config=cfg, tol=tol)
    except MATH_ERRORS as exc:
        return EXIT_REJECT, "", f"{path}: {exc}"
    except INPUT_ERRORS as exc:
        return EXIT_INPUT, "", f"{path}: {exc}"
    dec = r.decomposition.absorb_weights() if absorb else r.decomposition
    c = r.certificate
    summary = (f"{path}: {c.count} summands (bound {c.bound}, lower bound {c.lower_bound}), "
               f"relative residual {c.relative_residual:.2e}")
    return EXIT_OK, dumps(decomposition_to_json(dec, c)), summary


def _output_path(output: str | None, src: str, batch: bool) -> str | None:
    if not batch or output is None:
        return output
    return str(Path(output) / (Path(src).stem + ".decomposition.json"))


def cmd_decompose(args) -> int:
    try:
        seed = check_seed(args.seed)
    except (TypeError, ValueError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    if args.tol <= 0 or args.retry_lines < 1 or args.retry_h < 1:
        return _fail(EXIT_INPUT, "--tol, --retry-lines and --retry-h must be positive")
    inputs = args.input
    batch = len(inputs) > 1
    if batch and args.output is not None:
        Path(args.output).mkdir(parents=True, exist_ok=True)
    if batch and args.output is None:
        return _fail(EXIT_INPUT, "several inputs need --output DIR")
    job = (seed, args.tol, args.retry_lines, args.retry_h, args.absorb_weights)
    if batch and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_decompose_one, inputs, *[[a] * len(inputs) for a in job]))
    else:
        results = [_decompose_one(p, *job) for p in inputs]
    worst = EXIT_OK
    for src, (code, text, summary) in zip(inputs, results):
        print(summary, file=sys.stderr)
        if code == EXIT_OK:
            _emit(text, _output_path(args.output, src, batch))
        worst = max(worst, code)
    return worst


# --- bounds ---------------------------------------------------------------

def cmd_bounds(args) -> int:
    if args.max_d < 1:
        return _fail(EXIT_INPUT, "--max-d must be at least 1")
    rows = bounds_table(args.max_d)
    if args.json:
        sys.stdout.write(dumps([r.to_dict() for r in rows]))
    else:
        print(format_bounds_table(rows))
    return EXIT_OK


# --- sylvester ------------------------------------------------------------

def cmd_sylvester(args) -> int:
    try:
        f = check_form(read_form(args.input), nvars=2)
        seed = check_seed(args.seed)
    except INPUT_ERRORS as exc:
        return _fail(EXIT_INPUT, f"{args.input}: {exc}")
    try:
        dec = sylvester_min_decompose(f, seed=seed, tol=args.tol)
    except MATH_ERRORS as exc:
        return _fail(EXIT_REJECT, str(exc))
    cert = verify_decomposition(f, dec, args.tol, seed=seed)
    if isinstance(cert, Reject):
        return _fail(EXIT_REJECT, cert.reason)
    print(f"{args.input}: {dec.count} summands", file=sys.stderr)
    _emit(dumps(decomposition_to_json(dec, cert)), args.output)
    return EXIT_OK


# --- verify ---------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        f = check_form(read_form(args.form), allow_zero=True)
        dec, cert = decomposition_from_json(read_json(args.decomposition))
    except INPUT_ERRORS as exc:
        return _fail(EXIT_INPUT, str(exc))
    if dec.degree != f.degree or dec.nvars != f.nvars:
        return _fail(EXIT_INPUT, "form and decomposition do not match in degree or variables")
    result = verify_decomposition(f, dec, args.tol)
    if isinstance(result, Reject):
        print(f"REJECT: {result.reason}")
        return EXIT_REJECT
    if cert is not None:
        expected = {"count": dec.count, "degree": f.degree, "input_hash": form_hash(f)}
        bad = [k for k, v in expected.items() if k in cert and cert[k] != v]
        if bad:
            print(f"REJECT: embedded certificate disagrees on {', '.join(bad)}")
            return EXIT_REJECT
    print(f"OK: {result.count} summands (bound {result.bound}, lower bound "
          f"{result.lower_bound}), relative residual {result.relative_residual:.2e}")
    return EXIT_OK


# --- random-form ----------------------------------------------------------

def random_form(nvars: int, degree: int, height: int = 9, seed: int = 0) -> Form:
    """Integer coefficients drawn uniformly from ``[-height, height]``; never zero."""
    rng = rng_stream(seed, "random-form", nvars, degree)
    n = num_monomials(nvars, degree)
    while True:
        c = rng.integers(-height, height + 1, size=n)
        if np.any(c):
            return Form(nvars, degree, as_exact([Fraction(int(a)) for a in c]))


def cmd_random_form(args) -> int:
    if args.degree < 1:
        return _fail(EXIT_INPUT, "--degree must be at least 1")
    if args.height < 1:
        return _fail(EXIT_INPUT, "--height must be at least 1")
    try:
        seed = check_seed(args.seed)
    except (TypeError, ValueError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    f = random_form(args.vars, args.degree, args.height, seed)
    _emit(dumps(form_to_json(f)), args.output)
    return EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ternary-waring",
                description="Certified power sum decompositions of ternary forms.")
    p.add_argument("--verbose", "-v", action="store_true", help="log per-level retry counts")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="decompose ternary FormFiles")
    d.add_argument("--input", action="append", required=True,
                   help="FormFile path; repeat for batch mode")
    d.add_argument("--seed", type=int, default=None, help="defaults to $WARING_SEED, then 0")
    d.add_argument("--tol", type=float, default=1e-9)
    d.add_argument("--retry-lines", type=int, default=64)
    d.add_argument("--retry-h", type=int, default=200)
    d.add_argument("--absorb-weights", action="store_true",
                   help="fold weights into the linear forms")
    d.add_argument("--output", help="output file (a directory in batch mode); default stdout")
    d.add_argument("--jobs", type=int, default=1, help="worker processes in batch mode")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("bounds", help="print the rank bounds table")
    b.add_argument("--max-d", type=int, default=10)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sylvester", help="shortest decomposition of a binary form")
    s.add_argument("--input", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--output")
    s.set_defaults(func=cmd_sylvester)

    v = sub.add_parser("verify", help="check a DecompositionFile against a FormFile")
    v.add_argument("--form", required=True)
    v.add_argument("--decomposition", required=True)
    v.add_argument("--tol", type=float, default=1e-9)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("random-form", help="write a random integer FormFile")
    r.add_argument("--vars", type=int, choices=(2, 3), default=3)
    r.add_argument("--degree", type=int, required=True)
    r.add_argument("--height", type=int, default=9)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--output")
    r.set_defaults(func=cmd_random_form)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
