"""Command-line front end: every subcommand writes plot-ready CSV and/or JSON.

Floats are written with 17 significant digits so files re-parse to the
computed values.  Log verbosity comes from ``LRC_LOG_LEVEL``; everything that
affects numbers is a flag.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import decoders, llr, weights
from .asymptotics import LN2, ScgfSpec, exponent_curve, match_report, rate_point
from .model import LrcParams

log = logging.getLogger("lrc")


class CliError(Exception):
    """Validation failure reported with exit status 2."""


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def write_csv(path: str, header: list[str], rows) -> None:
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    finally:
        if close:
            fh.close()


def write_json(path: str, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def sidecar_path(out: str) -> str:
    if out == "-":
        return "-"
    return str(Path(out).with_suffix(".json"))


def _positive(name: str, value: float) -> None:
    if not (value > 0) or not math.isfinite(value):
        raise CliError(f"--{name} must be positive and finite (got {value})")


def _grid(lo: float, hi: float, size: int, name: str = "grid") -> np.ndarray:
    if size < 2:
        raise CliError(f"--{name} must be >= 2 (got {size})")
    if not lo < hi:
        raise CliError(f"empty range [{lo}, {hi}]")
    return np.linspace(lo, hi, size)


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeff(args) -> None:
    n = args.n
    if n < 2:
        raise CliError("--n must be >= 2")
    W = weights.max_weight(n)
    exact = None
    if not args.no_exact:
        if n > weights.EXACT_N_MAX:
            raise CliError(f"exact counts need --n <= {weights.EXACT_N_MAX}; pass --no-exact")
        exact = weights.logistic_coefficient_exact(n).log_counts()
    log_total = n * LN2
    cache: dict[int, float] = {}
    rows = []
    for w in range(W + 1):
        if 0 < w < W:
            key = min(w, W - w)
            if key not in cache:
                cache[key] = weights.bridges_log_approx(n, w).log_count
            approx = cache[key]
        else:
            approx = None
        ex = None if exact is None else float(exact[w])
        err = None
        if approx is not None and ex is not None:
            # (approx - exact) / 2^n, the error relative to the total sequence count
            err = math.exp(approx - log_total) - math.exp(ex - log_total)
        rows.append((w, ex, approx, err))
    write_csv(args.out, ["w", "exact_log_count", "bridges_log_count", "signed_error"], rows)


def cmd_scgf(args) -> None:
    _positive("beta", args.beta)
    alphas = _grid(args.alpha_min, args.alpha_max, args.grid)
    soft, hard = ScgfSpec("soft", args.beta), ScgfSpec("hard", args.beta)
    rows = []
    for a in alphas:
        ls, lh = soft.value(a), hard.value(a)
        rows.append((a, ls, lh, ls / LN2, lh / LN2))
    write_csv(args.out, ["alpha", "lambda_soft", "lambda_hard", "lambda2_soft", "lambda2_hard"], rows)


def cmd_rate(args) -> None:
    _positive("beta", args.beta)
    if not 0 < args.cap:
        raise CliError("--cap must be positive")
    xs = _grid(0.0, 1.0, args.grid)
    specs = {m: ScgfSpec(m, args.beta) for m in ("soft", "hard")}
    rows = []
    for x in xs:
        row = [x]
        flags = []
        for m in ("soft", "hard"):
            p = rate_point(specs[m], min(x * LN2, LN2), args.cap)
            row.append(args.cap if p.diverged else p.value / LN2)
            flags.append(p.diverged)
        rows.append(row + flags)
    write_csv(args.out, ["x_bits", "rate2_soft", "rate2_hard", "diverged_soft", "diverged_hard"], rows)


def cmd_exponents(args) -> None:
    _positive("beta", args.beta)
    if args.grid < 2:
        raise CliError("--grid must be >= 2")
    hard = exponent_curve(ScgfSpec("hard", args.beta), args.grid)
    soft = exponent_curve(ScgfSpec("soft", args.beta), args.grid)
    rows = zip(hard.rates, hard.error, soft.error, hard.success, soft.success)
    write_csv(args.out, ["R", "eps_hard", "eps_soft", "s_hard", "s_soft"], rows)
    write_json(sidecar_path(args.out), {
        "beta": args.beta,
        "C_hard": hard.capacity, "C_soft": soft.capacity,
        "Rcr_hard": hard.critical_rate, "Rcr_soft": soft.critical_rate,
        "H_half_hard": hard.h_half, "H_half_soft": soft.h_half,
    })


def cmd_match_bsc(args) -> None:
    for b in args.beta:
        _positive("beta", b)
    modes = ("soft", "hard") if args.mode == "both" else (args.mode,)
    rows = []
    for b in args.beta:
        for m in modes:
            r = match_report(b, m)
            rows.append((b, m, r.p, r.h_half / LN2, r.log10_beta, r.log10_p, r.heuristic_p, r.decades_off))
    write_csv(args.out, ["beta", "mode", "p", "H_half_bits", "log10_beta", "log10_p", "heuristic_p",
                         "decades_off"], rows)


def cmd_simulate(args) -> None:
    if args.n < 1:
        raise CliError("--n must be >= 1")
    _positive("beta", args.beta)
    if not 0 < args.rate < 1:
        raise CliError(f"--rate must lie in (0, 1) (got {args.rate})")
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    if args.workers < 1:
        raise CliError("--workers must be >= 1")
    if args.max_queries is None:
        cap = -1
    elif args.max_queries == 0:
        cap = None
    elif args.max_queries > 0:
        cap = args.max_queries
    else:
        raise CliError("--max-queries must be >= 0")
    report = decoders.monte_carlo_bler(LrcParams(args.n, args.beta), args.rate, args.trials, args.seed,
                                       args.decoder, cap, engine=args.engine,
                                       fresh_codebook=not args.fixed_codebook, workers=args.workers)
    write_json(args.out, report.to_dict())


def cmd_llr(args) -> None:
    _positive("sigma", args.sigma)
    if args.samples < 2:
        raise CliError("--samples must be >= 2")
    if not 0 < args.fraction <= 1:
        raise CliError("--fraction must lie in (0, 1]")
    family = llr.NoiseFamily(args.family, args.sigma)
    profile = llr.reliability_profile(args.samples, family, np.random.default_rng(args.seed))
    write_csv(args.out, ["normalized_index", "sorted_reliability"], zip(profile.index, profile.values))
    report = llr.linearity_report(profile, args.fraction).to_dict()
    report.update(family=args.family, sigma=args.sigma, samples=args.samples, seed=args.seed,
                  flat_tail_fraction=llr.flat_tail_fraction(profile))
    write_json(sidecar_path(args.out), report)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed for every random draw")
    common.add_argument("--workers", type=int, default=1, help="worker processes (never changes results)")
    common.add_argument("--out", default="-", help="output file ('-' for stdout)")

    p = argparse.ArgumentParser(prog="lrc", description="Linear reliability channel toolkit.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("coeff", parents=[common],
                       help="logistic coefficients vs Bridges' approximation (Fig. 4)",
                       description="Exact ln a(n,w) against Bridges' estimate for every w. Reproduces Fig. 4.")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--no-exact", action="store_true", help="skip the exact big-integer table")
    s.set_defaults(func=cmd_coeff)

    s = sub.add_parser("scgf", parents=[common], help="soft and hard sCGFs on an alpha grid (Fig. 5a)",
                       description="Guesswork sCGFs in nats and bits. Reproduces Fig. 5(a).")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--alpha-min", type=float, default=-2.0)
    s.add_argument("--alpha-max", type=float, default=5.0)
    s.add_argument("--grid", type=int, default=200)
    s.set_defaults(func=cmd_scgf)

    s = sub.add_parser("rate", parents=[common], help="base-2 rate functions (Fig. 5b)",
                       description="Soft and hard rate functions in bits. Reproduces Fig. 5(b).")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--grid", type=int, default=200)
    s.add_argument("--cap", type=float, default=1e6, help="value reported where the rate function diverges")
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("exponents", parents=[common], help="error and success exponents (Figs. 6-7)",
                       description="Random-coding exponents vs rate plus a JSON sidecar with capacities and "
                                   "critical rates. Reproduces Figs. 6 and 7.")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--grid", type=int, default=512)
    s.set_defaults(func=cmd_exponents)

    s = sub.add_parser("match-bsc", parents=[common], help="BSC flip rate with equal H_1/2 (Fig. 8)",
                       description="BSC(p) matched to the LRC by order-1/2 Renyi entropy rate. Reproduces Fig. 8.")
    s.add_argument("--beta", type=float, nargs="+", required=True)
    s.add_argument("--mode", choices=("soft", "hard", "both"), default="both")
    s.set_defaults(func=cmd_match_bsc)

    s = sub.add_parser("simulate", parents=[common], help="Monte-Carlo BLER of GRAND decoding (simulation tables)",
                       description="Block error rate over random codebooks with a Wilson 95%% interval.")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--decoder", choices=decoders.DECODER_KINDS, default="soft")
    s.add_argument("--max-queries", type=int, default=None,
                   help="abandonment cap (default 2^min(n,24); 0 disables)")
    s.add_argument("--engine", choices=decoders.ENGINES, default="auto")
    s.add_argument("--fixed-codebook", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("llr", parents=[common], help="sorted reliability profile (Figs. 2-3)",
                       description="Sorted |LLR| samples plus a linear-fit sidecar. Reproduces Figs. 2 and 3.")
    s.add_argument("--family", choices=llr.FAMILIES, default="normal")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--samples", type=int, default=2**16)
    s.add_argument("--fraction", type=float, default=0.5)
    s.set_defaults(func=cmd_llr)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("LRC_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, ValueError) as exc:
        print(f"lrc {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lrc {args.command}: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
