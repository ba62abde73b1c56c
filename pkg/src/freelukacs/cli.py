"""Command-line entry point: ``freelukacs {law,forward,inverse,roundtrip,simulate}``.

Results are JSON documents with a top-level ``schema`` version; exact
rationals are written as strings such as ``"3/8"``.  Output goes to
``--out``, else to ``$FREELUKACS_OUTPUT_DIR/<command>.<ext>`` when that
variable is set, else to stdout.

Exit status: 0 when every check passes, 1 when a verification fails,
2 for invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from .laws import (
    FreeBinomialLaw,
    FreePoissonLaw,
    InvalidLawError,
    fb_cumulants,
    fb_measure,
    fb_moments,
    fb_validate,
    mp_cumulants,
    mp_measure,
    mp_moments,
)
from .lukacs import (
    conditional_moment_check,
    forward_check,
    roundtrip_characterization,
    solve_inverse,
    transform_checks,
)
from .matrixlab import (
    AdmissibilityError,
    LukacsEnsemble,
    exact_limits,
    mixed_words,
    spectral_histogram,
    target_measures,
    trace_mixed_moment,
)
from .ncpart import Word
from .series import SeriesError

SCHEMA = 1
OUTPUT_ENV = "FREELUKACS_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InputError(ValueError):
    """Bad command-line input, reported with exit status 2."""


def _number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def _emit(args, payload: dict, table: list[dict] | None = None) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(table[0]))
        writer.writeheader()
        writer.writerows(_jsonable(row) for row in table)
        text = buf.getvalue()
    else:
        doc = {"schema": SCHEMA, "command": args.command, **payload}
        text = json.dumps(_jsonable(doc), indent=2) + "\n"
    out = args.out
    if out is None and os.environ.get(OUTPUT_ENV):
        out = Path(os.environ[OUTPUT_ENV]) / f"{args.command}.{fmt}"
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _mode(args) -> str:
    return "exact" if args.mode == "rational" else "float"


# ---------------------------------------------------------------------------
# commands


def cmd_law(args) -> int:
    if args.family == "mp":
        if args.lam is None:
            raise InputError("law mp needs --lambda")
        law = FreePoissonLaw(args.lam, args.alpha)
        cum, mom = mp_cumulants(law, args.k), mp_moments(law, args.k)
        measure = mp_measure(law)
        params = {"lambda": law.lam, "alpha": law.alpha}
        validation = None
    else:
        if args.sigma is None or args.theta is None:
            raise InputError("law fb needs --sigma and --theta")
        check = fb_validate(args.sigma, args.theta)
        if not check.valid:
            raise InvalidLawError(json.dumps(_jsonable(check.as_dict())))
        law = FreeBinomialLaw(args.sigma, args.theta)
        cum, mom = fb_cumulants(law, args.k), fb_moments(law, args.k)
        measure = fb_measure(law) if law.evaluable else None
        params = {"sigma": law.sigma, "theta": law.theta}
        validation = check.as_dict()
    if _mode(args) == "float":
        cum, mom = [float(c) for c in cum], [float(m) for m in mom]

    rows = []
    payload = {"family": args.family, "parameters": params, "moments": mom, "cumulants": cum}
    if validation is not None:
        payload["validation"] = validation
    if measure is not None:
        payload["atoms"] = [{"location": loc, "weight": w} for loc, w in measure.atoms]
        payload["support"] = list(measure.support)
        a, b = measure.support
        t = np.linspace(0.0, np.pi, args.samples + 2)[1:-1]
        xs = (a + b) / 2 - (b - a) / 2 * np.cos(t)
        dens = measure.density(xs)
        payload["density"] = {"x": xs, "density": dens}
        rows = [{"x": x, "density": d} for x, d in zip(xs.tolist(), dens.tolist())]
    else:
        payload["note"] = "density and atoms need sigma, theta > 0"
    if args.format == "csv" and not rows:
        raise InputError("no density table to write as CSV")
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_forward(args) -> int:
    u = FreeBinomialLaw(args.sigma, args.theta)
    lam = u.total if args.lam is None else args.lam
    v = FreePoissonLaw(lam, args.alpha)
    cert = forward_check(u, v, args.k)
    c1 = u.theta * v.alpha
    c2 = u.theta * (u.theta + 1) * v.alpha**2
    r1, r2 = conditional_moment_check(u, v, max(args.k, 2), c1, c2)
    passed = cert.passed and r1 == 0 and r2 == 0
    payload = {
        "parameters": {"sigma": u.sigma, "theta": u.theta, "alpha": v.alpha, "lambda": v.lam},
        "passed": passed,
        "certificate": cert.as_dict(),
        "regression": {"c1": c1, "c2": c2, "residual_first": r1, "residual_second": r2},
    }
    _emit(args, payload)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_inverse(args) -> int:
    c1, c2 = args.c1, args.c2
    if c2 <= c1 * c1:
        raise InputError(f"need c2 > c1^2, got c1={c1}, c2={c2}")
    if args.beta0 is None or args.alpha1 is None:
        raise InputError("inverse needs --beta0 and --alpha1")
    vals = (c1, c2, args.beta0, args.alpha1)
    if _mode(args) == "float":
        vals = tuple(float(x) for x in vals)
    sol = solve_inverse(*vals, order=args.k)
    checks = transform_checks(sol)
    tol = 0 if _mode(args) == "exact" else 1e-9
    passed = all(abs(r) <= tol for r in checks.values())
    mp, fb = sol.laws
    payload = {
        "passed": passed,
        "solution": sol.as_dict(),
        "laws": {"V": str(mp), "U": str(fb)},
        "checks": checks,
    }
    _emit(args, payload)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_roundtrip(args) -> int:
    mode = _mode(args)
    rep = roundtrip_characterization(
        args.sigma, args.theta, args.alpha, K=args.k, mode=mode, perturb_gamma0=args.perturb_gamma0
    )
    if mode == "exact":
        passed = rep.exact_match and bool(rep.forward_passed)
    else:
        passed = all(float(d) <= args.tol for d in rep.deviations.values())
    payload = {"passed": passed, "mode": args.mode, **rep.as_dict()}
    _emit(args, payload)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % 2**32)
    ens = LukacsEnsemble(args.n, float(args.sigma), float(args.theta), float(args.alpha), seed)
    ens.check_admissible()
    words = [Word.parse(w) for w in args.word] if args.word else mixed_words("UV") + mixed_words("XY")
    limits = exact_limits(ens, words)

    start = time.perf_counter()
    samples = ens.samples(args.reps)
    targets = target_measures(ens)
    spectra = {}
    for role in ("U", "V"):
        spectra[role] = spectral_histogram([s[role] for s in samples], targets[role], args.bins)
    rows = []
    for w in words:
        est = trace_mixed_moment(w, samples)
        row = est.as_dict()
        row["limit"] = float(limits[str(w)])
        row["z_score"] = (est.mean - row["limit"]) / est.standard_error
        rows.append(row)
    elapsed = time.perf_counter() - start

    passed = all(h.distance < args.ks_threshold for h in spectra.values()) and all(
        abs(r["z_score"]) <= args.z_threshold for r in rows
    )
    payload = {
        "passed": passed,
        "parameters": {
            "sigma": args.sigma, "theta": args.theta, "alpha": args.alpha,
            "N": args.n, "p": ens.shapes[0], "q": ens.shapes[1],
            "replicates": args.reps, "seed": seed,
        },
        "spectral": {role: h.as_dict() for role, h in spectra.items()},
        "estimates": rows,
        "seconds": elapsed,
    }
    _emit(args, payload, rows)
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freelukacs", description="Verify the free Lukacs property exactly and by simulation."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, csv_ok=False, mode=True):
        p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"] if csv_ok else ["json"], default="json")
        if mode:
            p.add_argument("--mode", choices=["rational", "float"], default="rational")

    p = sub.add_parser("law", help="moments, cumulants and density of MP or fb laws")
    p.add_argument("family", choices=["mp", "fb"])
    p.add_argument("--lambda", dest="lam", type=_number)
    p.add_argument("--alpha", type=_number, default=Fraction(1))
    p.add_argument("--sigma", type=_number)
    p.add_argument("--theta", type=_number)
    p.add_argument("--k", type=int, default=10, help="number of moments and cumulants")
    p.add_argument("--samples", type=int, default=201, help="density sample points")
    common(p, csv_ok=True)
    p.set_defaults(func=cmd_law)

    p = sub.add_parser("forward", help="exact freeness certificate for X and Y")
    p.add_argument("--sigma", type=_number, required=True)
    p.add_argument("--theta", type=_number, required=True)
    p.add_argument("--alpha", type=_number, default=Fraction(1))
    p.add_argument("--lambda", dest="lam", type=_number, help="rate of V (default sigma + theta)")
    p.add_argument("--k", type=int, default=6, help="largest word length")
    common(p, mode=False)
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("inverse", help="recover the laws from regression constants")
    p.add_argument("--c1", type=_number, required=True)
    p.add_argument("--c2", type=_number, required=True)
    p.add_argument("--beta0", type=_number)
    p.add_argument("--alpha1", type=_number)
    p.add_argument("--k", type=int, default=10, help="series order")
    common(p)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("roundtrip", help="laws -> mixed moments -> recovered laws")
    p.add_argument("--sigma", type=_number, required=True)
    p.add_argument("--theta", type=_number, required=True)
    p.add_argument("--alpha", type=_number, default=Fraction(1))
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--perturb-gamma0", type=_number, default=None)
    p.add_argument("--tol", type=float, default=1e-9, help="float-mode pass tolerance")
    common(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("simulate", help="complex Wishart / matrix-beta Monte Carlo")
    p.add_argument("--sigma", type=_number, default=Fraction(1))
    p.add_argument("--theta", type=_number, default=Fraction(1))
    p.add_argument("--alpha", type=_number, default=Fraction(1))
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--seed", type=int, default=None, help="recorded in the output when generated")
    p.add_argument("--word", action="append", help="word over {U,V} or {X,Y}; repeatable")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--ks-threshold", type=float, default=0.05)
    p.add_argument("--z-threshold", type=float, default=3.0)
    common(p, csv_ok=True, mode=False)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidLawError, AdmissibilityError, SeriesError, ValueError) as exc:
        print(f"freelukacs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
