"""Command-line front end: solve, beta sweeps, and oracle verification.

Examples::

    ecquant --preset fig2 --K 4 --beta 6
    ecquant --preset fig2 --K 4 --sweep 1,2,3,4,5,6,7,8,9,10,11,12,13 --csv
    ecquant --channel ch.json --K 2 --beta 2 --verify
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .channel import BinaryInputChannel, SortedChannel, load_channel, random_channel, sort_by_posterior
from .continuous import (
    ContinuousChannelSpec,
    DiscretizedChannel,
    discretize,
    fig2_spec,
    gaussian,
    is_monotone_lr,
    y_boundary,
)
from .cost import CostBreakdown
from .dp import solve
from .errors import QuantizerError, TooLarge
from .oracles import (
    OPTIMALITY_TOL,
    brute_force_contiguous,
    brute_force_unrestricted,
    check_optimality_condition,
    sample_stochastic_objective,
)
from .quantizer import ThresholdQuantizer

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3

SWEEP_TOL = 1e-9


class ConfigError(Exception):
    """Malformed command-line or config input (as opposed to an invalid channel)."""


@dataclass
class Config:
    channel: str | None = None
    preset: str | None = None
    gaussian: tuple[float, float, float, float] | None = None
    prior: tuple[float, float] = (0.5, 0.5)
    range: tuple[float, float] = (-10.0, 10.0)
    bins: int = 200
    rule: str = "midpoint"
    random: int | None = None
    K: int = 4
    beta: float = 6.0
    seed: int = 0
    samples: int = 1000


def load_source(cfg: Config) -> tuple[BinaryInputChannel, ContinuousChannelSpec | None]:
    """Resolve the configured channel source to a discrete channel."""
    sources = [s for s in (cfg.channel, cfg.preset, cfg.gaussian, cfg.random) if s is not None]
    if len(sources) != 1:
        raise ConfigError("specify exactly one of --channel, --preset, --gaussian, --random")
    if cfg.channel is not None:
        try:
            return load_channel(cfg.channel), None
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read channel file {cfg.channel}: {exc}") from exc
    if cfg.random is not None:
        return random_channel(cfg.random, seed=cfg.seed), None
    if cfg.preset is not None:
        if cfg.preset != "fig2":
            raise ConfigError(f"unknown preset {cfg.preset!r}")
        spec = fig2_spec(cfg.bins)
    else:
        mu1, s1, mu2, s2 = cfg.gaussian
        spec = ContinuousChannelSpec(
            prior=tuple(cfg.prior),
            density1=gaussian(mu1, s1),
            density2=gaussian(mu2, s2),
            support=tuple(cfg.range),
            bins=cfg.bins,
        )
    return discretize(spec, cfg.rule), spec


def boundaries(sc: SortedChannel, q: ThresholdQuantizer) -> tuple[list[float], list]:
    """Posterior-space and (for binned channels) y-space values of the interior cuts.

    Only cuts separating two nonempty clusters are reported.
    """
    post = q.posterior_boundaries(sc)
    interior = sorted({a for a in q.cuts if 0 < a < sc.M})
    r_cuts = [post[q.cuts.index(a)] for a in interior]
    y_cuts = []
    if isinstance(sc.source, DiscretizedChannel):
        for a in interior:
            low = [int(j) for j in sc.perm[:a]]
            y = y_boundary(sc.source, low, sc.perm)
            y_cuts.append(y if isinstance(y, float) else None)
    return r_cuts, y_cuts


def _breakdown_dict(cb: CostBreakdown) -> dict:
    return {
        "objective": cb.objective,
        "I": cb.mutual_info,
        "HZ": cb.out_entropy,
        "HXgZ": cb.cond_entropy,
        "beta": cb.beta,
    }


def run_solve(cfg: Config) -> dict:
    ch, spec = load_source(cfg)
    sc = sort_by_posterior(ch)
    q, cb, _ = solve(sc, cfg.K, cfg.beta)
    report = check_optimality_condition(sc, q, cfg.beta)
    r_cuts, y_cuts = boundaries(sc, q)
    out = {
        "K": cfg.K,
        "beta": cfg.beta,
        "M": ch.M,
        "retained": sc.M,
        "dropped": list(sc.dropped),
        "cuts": list(q.cuts),
        "clusters": [[int(j) for j in sc.perm[a:b]] for a, b in q.clusters()],
        "posterior_cuts": r_cuts,
        "y_cuts": y_cuts,
        "cost": _breakdown_dict(cb),
        "optimality_condition": {
            "satisfied": report.satisfied,
            "worst_violation": report.worst_violation,
        },
    }
    if spec is not None:
        lr = is_monotone_lr(spec)
        out["monotone_lr"] = {"monotone": lr.monotone, "direction": lr.direction, "evidence": lr.evidence}
    return out


def sweep_row(sc: SortedChannel, K: int, beta: float) -> dict:
    q, cb, _ = solve(sc, K, beta)
    r_cuts, y_cuts = boundaries(sc, q)
    return {
        "beta": float(beta),
        "I": cb.mutual_info,
        "HZ": cb.out_entropy,
        "objective": cb.objective,
        "posterior_cuts": r_cuts,
        "y_cuts": y_cuts,
    }


def monotonicity_violations(rows: list[dict], tol: float = SWEEP_TOL) -> list[str]:
    """Pairs of consecutive sweep rows where I or H(Z) decreases by more than ``tol``."""
    bad = []
    for prev, cur in zip(rows, rows[1:]):
        for key in ("I", "HZ"):
            if cur[key] < prev[key] - tol:
                bad.append(f"{key} drops from {prev[key]!r} (beta={prev['beta']}) to {cur[key]!r} (beta={cur['beta']})")
    return bad


def run_sweep(cfg: Config, betas: list[float]) -> dict:
    if not betas:
        raise ConfigError("sweep needs at least one beta")
    if any(not b >= 0 for b in betas):
        raise ConfigError("sweep betas must be nonnegative")
    ch, _ = load_source(cfg)
    sc = sort_by_posterior(ch)
    rows = [sweep_row(sc, cfg.K, b) for b in sorted(betas)]
    violations = monotonicity_violations(rows)
    return {"K": cfg.K, "rows": rows, "monotone": not violations, "violations": violations}


def _fmt_cuts(row: dict) -> str:
    text = ";".join(repr(v) for v in row["posterior_cuts"])
    ys = row.get("y_cuts") or []
    if ys:
        text += "|" + ";".join("" if v is None else repr(v) for v in ys)
    return text


def sweep_csv(result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "I", "HZ", "objective", "cuts"])
    for row in result["rows"]:
        w.writerow([repr(row["beta"]), repr(row["I"]), repr(row["HZ"]), repr(row["objective"]), _fmt_cuts(row)])
    return buf.getvalue()


def run_verify(cfg: Config) -> dict:
    """Cross-check the DP optimum against every oracle that fits its budget."""
    ch, _ = load_source(cfg)
    sc = sort_by_posterior(ch)
    q, cb, _ = solve(sc, cfg.K, cfg.beta)
    dp_val = cb.objective
    checks = {}

    try:
        _, bf = brute_force_contiguous(sc, cfg.K, cfg.beta)
        checks["contiguous_oracle"] = {
            "status": "pass" if abs(bf - dp_val) <= 1e-9 else "fail",
            "oracle": bf,
            "dp": dp_val,
        }
    except TooLarge as exc:
        checks["contiguous_oracle"] = {"status": "skipped", "reason": str(exc)}

    try:
        bu = brute_force_unrestricted(sc, cfg.K, cfg.beta)
        checks["unrestricted_oracle"] = {
            "status": "pass" if abs(bu - dp_val) <= 1e-9 else "fail",
            "oracle": bu,
            "dp": dp_val,
        }
    except TooLarge as exc:
        checks["unrestricted_oracle"] = {"status": "skipped", "reason": str(exc)}

    samples = sample_stochastic_objective(sc, cfg.K, cfg.beta, seed=cfg.seed, count=cfg.samples)
    lowest = float(samples.min())
    checks["stochastic_dominance"] = {
        "status": "pass" if lowest >= dp_val - 1e-9 else "fail",
        "samples": int(samples.size),
        "min_sample": lowest,
        "dp": dp_val,
    }

    rep = check_optimality_condition(sc, q, cfg.beta)
    checks["optimality_condition"] = {
        "status": "pass" if rep.satisfied else "fail",
        "worst_violation": rep.worst_violation,
        "tolerance": OPTIMALITY_TOL,
    }
    ok = all(c["status"] != "fail" for c in checks.values())
    return {"K": cfg.K, "beta": cfg.beta, "cuts": list(q.cuts), "objective": dp_val, "checks": checks, "ok": ok}


# -- argument handling ------------------------------------------------------


def _floats(n: int | None = None):
    def parse(text: str):
        try:
            vals = tuple(float(v) for v in text.split(",") if v.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
        if n is not None and len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        return vals

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ecquant",
        description="Globally optimal entropy-constrained quantizers for binary-input channels.",
    )
    src = p.add_argument_group("channel source")
    src.add_argument("--channel", metavar="FILE", help="channel JSON file")
    src.add_argument("--preset", choices=["fig2"], help="built-in Gaussian instance")
    src.add_argument("--gaussian", type=_floats(4), metavar="MU1,SIGMA1,MU2,SIGMA2")
    src.add_argument("--random", type=int, metavar="M", help="random channel with M outputs (uses --seed)")
    src.add_argument("--prior", type=_floats(2), default=(0.5, 0.5), metavar="P1,P2")
    src.add_argument("--range", type=_floats(2), default=(-10.0, 10.0), metavar="LO,HI")
    src.add_argument("--bins", type=int, default=200)
    src.add_argument("--rule", choices=["midpoint", "cdf"], default="midpoint",
                     help="how continuous densities are binned")
    p.add_argument("--K", type=int, default=4, help="cluster budget")
    p.add_argument("--beta", type=float, default=6.0)
    p.add_argument("--sweep", type=_floats(), metavar="B1,B2,...")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000, help="stochastic quantizers drawn by --verify")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _g(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.6g}"
    return str(x)


def _text_solve(res: dict) -> str:
    c = res["cost"]
    lines = [
        f"K={res['K']} beta={_g(res['beta'])} outputs={res['M']} (retained {res['retained']})",
        f"cuts (sorted positions): {res['cuts']}",
        "posterior cuts: " + (", ".join(_g(v) for v in res["posterior_cuts"]) or "none"),
    ]
    if res["y_cuts"]:
        lines.append("y cuts: " + ", ".join(_g(v) for v in res["y_cuts"]))
    lines += [
        f"objective = {_g(c['objective'])}",
        f"I(X;Z) = {_g(c['I'])}  H(Z) = {_g(c['HZ'])}  H(X|Z) = {_g(c['HXgZ'])}",
        "optimality condition: "
        + ("satisfied" if res["optimality_condition"]["satisfied"] else "VIOLATED")
        + f" (worst violation {_g(res['optimality_condition']['worst_violation'])})",
    ]
    if "monotone_lr" in res:
        lr = res["monotone_lr"]
        lines.append(f"likelihood ratio monotone: {lr['monotone']} ({lr['direction'] or '-'}; {lr['evidence']} evidence)")
    return "\n".join(lines)


def _text_sweep(res: dict) -> str:
    lines = [f"{'beta':>8} {'I':>10} {'H(Z)':>10} {'objective':>10}  cuts"]
    for r in res["rows"]:
        lines.append(
            f"{_g(r['beta']):>8} {_g(r['I']):>10} {_g(r['HZ']):>10} {_g(r['objective']):>10}  "
            + ", ".join(_g(v) for v in r["posterior_cuts"])
        )
    lines.append("monotone in beta: " + ("yes" if res["monotone"] else "NO"))
    lines += ["  " + v for v in res["violations"]]
    return "\n".join(lines)


def _text_verify(res: dict) -> str:
    lines = [f"K={res['K']} beta={_g(res['beta'])} cuts={res['cuts']} objective={_g(res['objective'])}"]
    for name, c in res["checks"].items():
        extra = {k: v for k, v in c.items() if k != "status"}
        lines.append(f"{c['status'].upper():>7}  {name}  " + " ".join(f"{k}={_g(v)}" for k, v in extra.items()))
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.csv and args.sweep is None:
        parser.error("--csv is only available with --sweep")
    cfg = Config(
        channel=args.channel,
        preset=args.preset,
        gaussian=args.gaussian,
        prior=args.prior,
        range=args.range,
        bins=args.bins,
        rule=args.rule,
        random=args.random,
        K=args.K,
        beta=args.beta,
        seed=args.seed,
        samples=args.samples,
    )
    try:
        if args.verify:
            res = run_verify(cfg)
            text = _text_verify(res)
            code = EXIT_OK if res["ok"] else EXIT_CHECK_FAILED
        elif args.sweep is not None:
            res = run_sweep(cfg, list(args.sweep))
            if args.csv:
                sys.stdout.write(sweep_csv(res))
                return EXIT_OK if res["monotone"] else EXIT_CHECK_FAILED
            text = _text_sweep(res)
            code = EXIT_OK if res["monotone"] else EXIT_CHECK_FAILED
        else:
            res = run_solve(cfg)
            text = _text_solve(res)
            code = EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QuantizerError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.json:
        print(json.dumps(res, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
