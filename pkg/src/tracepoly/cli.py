"""Command-line front end.

Every command prints one JSON record (or a CSV table) to stdout::

    {"command": ..., "inputs": {...}, "result": ..., "metadata": {...}}

Exact values are written as ``"p/q"`` strings, never as floats.

Exit codes: 0 success, 2 usage error, 3 a spectrum violates the decider's
hypotheses, 4 a supplied certificate failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from ._rational import as_fraction
from .distributions import FLOAT_MAX_N, UniformSumParams, us_cdf, us_pdf
from .polytope import GENERATOR, exact_volume, mc_volume
from .spectra import (
    PartitionCertificate,
    RestrictedClassError,
    Spectrum,
    companion_realize,
    decide_restricted_realizable,
    gen_even_nonrealizable,
    gen_odd_nonrealizable,
    is_suleimanova,
    realize_union,
    s1,
    verify_realization,
)

EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_CHECK_FAILED = 4


class CLIError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _record(command: str, inputs: dict, result, metadata: dict | None = None) -> dict:
    rec = {"command": command, "inputs": inputs, "result": result}
    if metadata:
        rec["metadata"] = metadata
    return rec


def _n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N or LO..HI") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"range {text!r} must satisfy 1 <= LO <= HI")
    return list(range(lo, hi + 1))


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _spectrum(text: str) -> Spectrum:
    try:
        return Spectrum.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str) -> list[Fraction]:
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = as_fraction(lo), as_fraction(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use LO:HI:STEPS") from None
    if steps < 1 or hi < lo:
        raise argparse.ArgumentTypeError("grid needs STEPS >= 1 and LO <= HI")
    return [lo + i * (hi - lo) / steps for i in range(steps + 1)]


# -- commands -----------------------------------------------------------------


def cmd_volume(args) -> dict:
    rows = []
    for n in args.range:
        exact = exact_volume(n)
        row = {"n": n, "exact": str(exact), "float": float(exact)}
        if args.mode == "mc":
            est = mc_volume(n, args.samples, args.seed, workers=args.workers)
            row.update(estimate=est.mean, std_error=est.std_error)
        rows.append(row)
    inputs = {"range": f"{args.range[0]}..{args.range[-1]}", "mode": args.mode}
    metadata = None
    if args.mode == "mc":
        metadata = {"seed": args.seed, "samples": args.samples, "generator": GENERATOR}
    return _record("volume", inputs, rows, metadata)


def cmd_dist(args) -> dict:
    if not args.a < args.b:
        raise CLIError(f"need a < b, got a={args.a}, b={args.b}", EXIT_USAGE)
    xs = list(args.x) + (args.grid or [])
    if not xs:
        raise CLIError("give at least one x value or --grid", EXIT_USAGE)
    params = UniformSumParams(args.n, args.a, args.b)
    fn = us_pdf if args.which == "pdf" else us_cdf
    rows = []
    for x in xs:
        value = fn(params, x)
        rows.append({"x": str(x), "exact": str(value), "float": float(value)})
    inputs = {"function": args.which, "n": args.n, "a": str(args.a), "b": str(args.b)}
    return _record("dist", inputs, rows)


def _gen(args) -> dict:
    gen = gen_odd_nonrealizable if args.action == "gen-odd" else gen_even_nonrealizable
    try:
        sigma = gen(args.k)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_USAGE) from None
    result = {"spectrum": sigma.to_json(), "size": len(sigma), "s1": str(s1(sigma))}
    return _record(f"spectra {args.action}", {"k": args.k}, result)


def _decide(args) -> dict:
    if args.check is not None:
        return _check_certificate(args)
    if args.spectrum is None:
        raise CLIError("decide needs a spectrum", EXIT_USAGE)
    sigma = args.spectrum
    inputs = {"spectrum": sigma.to_json()}
    try:
        verdict = decide_restricted_realizable(sigma)
    except RestrictedClassError as exc:
        raise CLIError(f"precondition violated ({exc.violation}): {exc}", EXIT_PRECONDITION) from None
    if isinstance(verdict, PartitionCertificate):
        result = {"verdict": "REALIZABLE", "certificate": verdict.to_json()}
    else:
        result = {"verdict": "NOT_REALIZABLE", "reason": verdict.reason, "nodes": verdict.nodes}
    return _record("spectra decide", inputs, result)


def _check_certificate(args) -> dict:
    text = sys.stdin.read() if args.check == "-" else open(args.check, encoding="utf-8").read()
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            sigma = args.spectrum or Spectrum(data["inputs"]["spectrum"])
            cert_data = data["result"]["certificate"]
        else:
            sigma, cert_data = args.spectrum, data
        cert = PartitionCertificate.from_json(cert_data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CLIError(f"unreadable certificate: {exc}", EXIT_USAGE) from None
    if sigma is None:
        raise CLIError("a bare certificate needs the spectrum argument", EXIT_USAGE)
    ok = cert.check(sigma) and verify_realization(realize_union(cert), sigma)
    result = {"verdict": "CERTIFICATE_OK" if ok else "CERTIFICATE_INVALID"}
    rec = _record("spectra decide --check", {"spectrum": sigma.to_json()}, result)
    if not ok:
        _emit(rec, args)
        raise CLIError("certificate failed verification", EXIT_CHECK_FAILED)
    return rec


def _realize(args) -> dict:
    sigma = args.spectrum
    if is_suleimanova(sigma):
        matrix, method = companion_realize(sigma), "companion"
    else:
        try:
            verdict = decide_restricted_realizable(sigma)
        except RestrictedClassError as exc:
            raise CLIError(
                f"precondition violated ({exc.violation}): {exc}", EXIT_PRECONDITION
            ) from None
        if not isinstance(verdict, PartitionCertificate):
            raise CLIError(f"not realizable: {verdict.reason}", EXIT_PRECONDITION)
        matrix, method = realize_union(verdict), "block-companion"
    result = {
        "method": method,
        "order": matrix.order,
        "matrix": matrix.to_json(),
        "verified": verify_realization(matrix, sigma),
    }
    return _record("spectra realize", {"spectrum": sigma.to_json()}, result)


def cmd_spectra(args) -> dict:
    if args.action in ("gen-odd", "gen-even"):
        return _gen(args)
    if args.action == "decide":
        return _decide(args)
    return _realize(args)


# -- output -------------------------------------------------------------------


def _to_csv(rec: dict) -> str:
    rows = rec["result"]
    if not isinstance(rows, list) or not rows or not isinstance(rows[0], dict):
        raise CLIError("csv output is only available for tabular commands", EXIT_USAGE)
    buf = io.StringIO()
    fields = list(rows[0])
    writer = csv.DictWriter(buf, fieldnames=fields, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _emit(rec: dict, args) -> None:
    if getattr(args, "format", "json") == "csv":
        text = _to_csv(rec)
    else:
        text = json.dumps(rec, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracepoly",
        description="Trace-nonnegative polytope volumes and trace-zero spectra tooling.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    vol = sub.add_parser("volume", parents=[common], help="volume of T^n for a range of n")
    vol.add_argument("range", type=_n_range, help="N or LO..HI")
    vol.add_argument("--mode", choices=("exact", "mc"), default="exact")
    vol.add_argument("--samples", type=int, default=1_000_000)
    vol.add_argument("--seed", type=int, default=0)
    vol.add_argument("--workers", type=int, default=None, help="threads for Monte Carlo")
    vol.set_defaults(func=cmd_volume)

    dist = sub.add_parser(
        "dist",
        parents=[common],
        help="exact [a,b]-uniform-sum pdf/cdf",
        epilog="Negative fractions such as -1/2 must follow a '--' separator.",
    )
    dist.add_argument("which", choices=("pdf", "cdf"))
    dist.add_argument("n", type=int)
    dist.add_argument("a", type=_rational)
    dist.add_argument("b", type=_rational)
    dist.add_argument("x", type=_rational, nargs="*")
    dist.add_argument("--grid", type=_grid, metavar="LO:HI:STEPS", help="evenly spaced x values")
    dist.set_defaults(func=cmd_dist)

    spec = sub.add_parser("spectra", help="generate, decide and realize spectra")
    spec.add_argument("--out", metavar="FILE")
    ssub = spec.add_subparsers(dest="action", required=True)
    for name in ("gen-odd", "gen-even"):
        g = ssub.add_parser(name, help=f"{name.split('-')[1]}-order non-realizable trace-zero spectrum")
        g.add_argument("k", type=int)
    d = ssub.add_parser("decide", help="decide realizability of {1 x k, negatives}")
    d.add_argument("spectrum", type=_spectrum, nargs="?", help="comma-separated rationals")
    d.add_argument(
        "--check",
        metavar="FILE",
        help="re-verify a certificate (a decide JSON record, or a bare list of parts); '-' reads stdin",
    )
    r = ssub.add_parser("realize", help="explicit nonnegative realizing matrix")
    r.add_argument("spectrum", type=_spectrum)
    spec.set_defaults(func=cmd_spectra)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be >= 1")
    try:
        rec = args.func(args)
        _emit(rec, args)
    except CLIError as exc:
        print(f"tracepoly: error: {exc}", file=sys.stderr)
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
