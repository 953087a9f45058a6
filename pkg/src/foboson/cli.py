"""Command-line front end; every subcommand prints one JSON report.

Exit status is 0 when every check in the report passes, 1 on a failed check
or a domain error (reported as ``{"error": kind, "detail": text}``) and 2 on
bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import gcd

import numpy as np

from . import arith, bracket, dgchain
from .elliptic import EllipticContext
from .errors import DomainError, FobosonError

SCHEMA_VERSION = 1

DEFAULT_TOL = {
    "jacobi": 1e-8,
    "lattice": 1e-9,
    "prime": 1e-9,
}


def parse_tau(text: str) -> complex:
    """Parse ``"a+bi"`` style text, e.g. ``"1.0i"``, ``"0.3+1.1i"``, ``"i"``."""
    cleaned = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise DomainError(f"cannot parse tau from {text!r}") from None


def parse_dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"cannot parse dims from {text!r}") from None
    if not dims:
        raise DomainError("dims must not be empty")
    return dims


def tolerance(name: str, override: float | None) -> float:
    if override is not None:
        return override
    env = os.environ.get("FOBOSON_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise DomainError(f"FOBOSON_TOL is not a number: {env!r}") from None
    return DEFAULT_TOL[name]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Each trial gets its own stream, determined by (seed, trial) alone."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _check(residual: float, tol: float) -> dict:
    return {"maxResidual": float(residual), "tolerance": float(tol), "pass": bool(residual < tol)}


def _complex(z) -> list[float]:
    return [float(z.real), float(z.imag)]


def cmd_contfrac(args):
    return arith.report(args.n, args.k), True


def cmd_dim_end(args):
    value = arith.dim_end(args.n, args.k)
    return {"n": args.n, "k": args.k, "dimEnd": value, "pass": value == args.n}, value == args.n


def cmd_degrees(args):
    inv = arith.chain_invariants(args.n, args.k)
    degs = arith.det_line_degrees(args.n, args.k)
    lam = arith.lambda_degrees(inv)
    ok = inv.p == 1 or sum(degs) == sum(inv.expansion) + 2 * inv.p - 2
    out = {
        "n": args.n,
        "k": args.k,
        "expansion": list(inv.expansion),
        "lambdaDegrees": lam,
        "detLineDegrees": degs,
        "notes": list(arith.NOTES[:2]),
        "pass": ok,
    }
    return out, ok


def cmd_image(args):
    desc = arith.image_descriptor(args.n, args.k)
    e = arith.negative_cf(args.n, args.k)
    out = {
        "n": args.n,
        "k": args.k,
        "tauBlocks": arith.tau_partition(e).as_lists(),
        "blockSizes": list(desc.block_sizes),
        "ambientPower": desc.ambient_power,
        "fiberDimension": desc.fiber_dimension,
        "quotientLabel": desc.quotient_label,
    }
    return out, True


def _context(args) -> EllipticContext:
    return EllipticContext(parse_tau(args.tau))


def cmd_bracket(args):
    ctx = _context(args)
    chart, rejected = bracket.random_chart(args.n_points, ctx, trial_rng(args.seed, 0))
    P = bracket.bracket_matrix(chart, ctx)
    n = chart.n
    E = P.entries
    antisym = float(np.abs(E + E.T).max())
    uu = float(np.abs(E[:n, :n]).max())
    vu = E[n:, :n]
    integral = float(np.abs(vu - np.round(vu.real)).max())
    tol = tolerance("lattice", args.tol)
    lat = bracket.lattice_invariance_check(chart, ctx, tol=tol)
    checks = {
        "antisymmetry": _check(antisym, 1e-12),
        "uuBlockZero": {"maxResidual": uu, "tolerance": 0.0, "pass": uu == 0.0},
        "vuBlockInteger": {"maxResidual": integral, "tolerance": 0.0, "pass": integral == 0.0},
        "latticeInvariance": lat,
    }
    out = {"tau": _complex(ctx.tau), "chart": chart.to_json(ctx.tau), "rejections": rejected, "checks": checks}
    if args.emit_matrix:
        out["bivector"] = P.to_json()
    return out, all(c["pass"] for c in checks.values())


def _sweep_charts(args):
    ctx = _context(args)
    for t in range(args.trials):
        chart, rejected = bracket.random_chart(args.n_points, ctx, trial_rng(args.seed, t))
        yield t, ctx, chart, rejected


def cmd_jacobi(args):
    tol = tolerance("jacobi", args.tol)
    fd_tol = 10 * args.step**2
    trials = []
    worst = worst_fd = 0.0
    for t, ctx, chart, rejected in _sweep_charts(args):
        J = bracket.all_jacobiators(chart, ctx)
        Jf = bracket.all_jacobiators(chart, ctx, step=args.step)
        scale = bracket.jacobiator_scale(chart, ctx)
        rel = max((abs(v) for v in J.values()), default=0.0) / scale
        fd = max((abs(J[key] - Jf[key]) for key in J), default=0.0)
        worst, worst_fd = max(worst, rel), max(worst_fd, fd)
        trials.append({"trial": t, "rejections": rejected, "scale": scale, "relativeJacobiator": rel, "fdDifference": fd})
    checks = {"jacobiator": _check(worst, tol), "finiteDifference": _check(worst_fd, fd_tol)}
    out = {"nPoints": args.n_points, "tau": _complex(parse_tau(args.tau)), "step": args.step,
           "trials": trials, "checks": checks}
    return out, all(c["pass"] for c in checks.values())


def cmd_prime_check(args):
    tol = tolerance("prime", args.tol)
    trials = []
    worst = 0.0
    for t, ctx, chart, rejected in _sweep_charts(args):
        rep = bracket.prime_bracket_check(chart, ctx, tol=tol)
        worst = max(worst, rep["maxResidual"])
        trials.append({"trial": t, "rejections": rejected, **rep})
    checks = {"logCanonical": _check(worst, tol)}
    out = {"nPoints": args.n_points, "tau": _complex(parse_tau(args.tau)), "trials": trials, "checks": checks}
    return out, checks["logCanonical"]["pass"]


def cmd_dg_verify(args):
    dims = parse_dims(args.dims)
    trials = []
    ok = True
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        chain = dgchain.random_chain(dims, rng)
        rows = dgchain.run_all_checks(chain, rng)
        ok = ok and all(r["pass"] for r in rows)
        trials.append({"trial": t, "chain": chain.to_json(), "squareNonzero": chain.square_nonzero(), "checks": rows})
    return {"dims": dims, "trials": trials, "pass": ok}, ok


def cmd_sweep(args):
    if args.max_n < 2:
        raise DomainError("max-n must be at least 2")
    pairs = 0
    failures = []
    for n in range(2, args.max_n + 1):
        for k in range(1, n):
            if gcd(n, k) != 1:
                continue
            pairs += 1
            try:
                inv = arith.chain_invariants(n, k)
                inv.check()
                assert arith.dim_end(n, k) == n
                tau = arith.tau_partition(inv.expansion)
                slope = arith.slope_classes(inv)
                assert sorted(tau.sizes) == sorted(slope.sizes)
                degs = arith.det_line_degrees(n, k)
                if inv.p >= 2:
                    assert sum(degs) == sum(inv.expansion) + 2 * inv.p - 2
            except AssertionError as exc:
                failures.append({"n": n, "k": k, "detail": str(exc)})
    return {"maxN": args.max_n, "pairs": pairs, "failures": failures, "pass": not failures}, not failures


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foboson", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def nk(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.set_defaults(func=func)

    nk("contfrac", cmd_contfrac, "full continued-fraction report")
    nk("dim-end", cmd_dim_end, "endomorphism dimension sum")
    nk("degrees", cmd_degrees, "line bundle degrees from the Euler form")
    nk("image", cmd_image, "block structure of the image")

    def chart_args(p, trials):
        p.add_argument("--n-points", type=int, required=True)
        p.add_argument("--tau", required=True, help='modular parameter, e.g. "0.3+1.1i"')
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        if trials:
            p.add_argument("--trials", type=int, default=1)

    p = sub.add_parser("bracket", help="bivector of one random chart")
    chart_args(p, trials=False)
    p.add_argument("--emit-matrix", action="store_true")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("jacobi", help="Jacobi identity on random charts")
    chart_args(p, trials=True)
    p.add_argument("--step", type=float, default=1e-4)
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("prime-check", help="log-canonical coordinates on random charts")
    chart_args(p, trials=True)
    p.set_defaults(func=cmd_prime_check)

    p = sub.add_parser("dg-verify", help="exact chain-level identities")
    p.add_argument("--dims", required=True, help="comma separated, e.g. 2,3,2")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_dg_verify)

    p = sub.add_parser("sweep", help="arithmetic identities over all coprime pairs")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        body, ok = args.func(args)
        report = {"schemaVersion": SCHEMA_VERSION, "command": args.command, **body}
        status = 0 if ok else 1
    except FobosonError as exc:
        report = {"schemaVersion": SCHEMA_VERSION, "error": exc.kind, "detail": str(exc)}
        status = 1
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
