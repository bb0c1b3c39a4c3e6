"""Command-line experiment runner.

Exit codes: 0 success, 1 a verified property failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

from . import bounds, farey, poisson, sieve, trigpoly, verify
from .rng import SplitMix64

LHS_FIELDS = ("seq", "trial", "Q", "N", "Z", "lhs", "seed")
GRID_FIELDS = ("seq", "trial") + bounds.CSV_FIELDS
RANDOM_KINDS = ("random_pm1", "unimodular")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SeqSpec:
    kind: str
    beta: float | None = None
    path: str | None = None

    @classmethod
    def parse(cls, text: str) -> "SeqSpec":
        if text in ("ones",) + RANDOM_KINDS:
            return cls(text)
        if text.startswith("file:"):
            return cls("file", path=text[5:])
        for prefix in ("point_mass:", "point_mass("):
            if text.startswith(prefix):
                beta = float(text[len(prefix) :].rstrip(")"))
                if not 0 <= beta < 1:
                    raise UsageError(f"point_mass beta must lie in [0, 1), got {beta}")
                return cls("point_mass", beta=beta)
        raise UsageError(f"unknown sequence spec {text!r}")

    def label(self) -> str:
        if self.kind == "point_mass":
            return f"point_mass({self.beta!r})"
        if self.kind == "file":
            return f"file:{self.path}"
        return self.kind

    @property
    def random(self) -> bool:
        return self.kind in RANDOM_KINDS

    def build(self, N: int, seed: int, trial: int) -> trigpoly.TrigPolynomial:
        if self.kind == "ones":
            return trigpoly.ones(N)
        if self.kind == "random_pm1":
            return trigpoly.random_pm1(N, SplitMix64.derive(seed, N, trial))
        if self.kind == "unimodular":
            return trigpoly.random_unimodular(N, SplitMix64.derive(seed, N, trial))
        if self.kind == "point_mass":
            return trigpoly.point_mass(N, self.beta)
        poly = trigpoly.load_sequence(self.path)
        if poly.N < N:
            raise UsageError(f"{self.path} holds {poly.N} coefficients, need N={N}")
        return trigpoly.TrigPolynomial(poly.M, poly.coeffs[:N])


@dataclass
class ExperimentConfig:
    subcommand: str
    grid: list[tuple[int, int]] = field(default_factory=list)
    trials: int = 1
    seed: int = 0
    seqs: list[SeqSpec] = field(default_factory=lambda: [SeqSpec("ones")])
    bound_names: tuple[str, ...] = bounds.BOUND_NAMES
    fmt: str = "csv"
    out: str | None = None
    reproducible: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        for Q, N in self.grid:
            if Q < 1 or N < 1:
                raise UsageError(f"grid point (Q={Q}, N={N}) needs Q, N >= 1")

    def tasks(self):
        for Q, N in self.grid:
            for spec in self.seqs:
                for trial in range(self.trials if spec.random else 1):
                    yield Q, N, spec, trial


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SIEVELAB_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    """map() that may use threads but always yields results in input order."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def cmd_lhs(config: ExperimentConfig) -> list[dict]:
    def run(task):
        Q, N, spec, trial = task
        poly = spec.build(N, config.seed, trial)
        lhs = trigpoly.lhs_square_moduli(poly, Q, "full")
        return {"seq": spec.label(), "trial": trial, "Q": Q, "N": N, "Z": trigpoly.norm_Z(poly), "lhs": lhs, "seed": config.seed}

    return _ordered_map(run, config.tasks())


def cmd_ratio_grid(config: ExperimentConfig) -> list[dict]:
    def run(task):
        Q, N, spec, trial = task
        poly = spec.build(N, config.seed, trial)
        lhs = trigpoly.lhs_square_moduli(poly, Q, "full")
        rows = []
        for name in config.bound_names:
            row = bounds.ratio_report(poly, Q, name, lhs=lhs).to_row()
            rows.append({"seq": spec.label(), "trial": trial, **row})
        return rows

    rows = [row for chunk in _ordered_map(run, config.tasks()) for row in chunk]
    for name in config.bound_names:
        ratios = [r["ratio"] for r in rows if r["bound_name"] == name and r["ratio"] != ""]
        if ratios:
            summary = {k: "" for k in GRID_FIELDS}
            summary.update(seq="summary", trial="max", bound_name=name, ratio=max(ratios))
            rows.append(summary)
    return rows


def emit(rows: list[dict], fields, config: ExperimentConfig) -> None:
    if config.fmt == "json":
        text = json.dumps([{k: row.get(k, "") for k in fields} for row in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        if not config.reproducible:
            buf.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
        writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        text = buf.getvalue()
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_count(alpha: str, Q: int, delta: str, mode: str) -> dict:
    delta_x = farey.exact(delta)
    if not 0 < delta_x <= 1:
        raise UsageError(f"delta must satisfy 0 < delta <= 1, got {delta}")
    params = farey.MajorArcParams(Q, delta_x)
    if mode == "max":
        count, witness = farey.max_P_over_alpha(Q, delta_x)
        arc = farey.in_major_arc(witness, params)
        return {"mode": "max", "Q": Q, "delta": delta, "count": count, "witness": str(witness),
                "witness_float": float(witness), "arc": "major" if arc else "minor"}
    w = farey.CountWindow(Q, delta_x, farey.exact(alpha))
    arc = farey.in_major_arc(w.alpha, params)
    return {"mode": "point", "Q": Q, "delta": delta, "alpha": alpha, "count": farey.count_P(w),
            "arc": "major" if arc else "minor", "arc_center": f"{arc[0]}/{arc[1]}" if arc else "",
            "near_ties": farey.near_ties(w)}


def cmd_verify(suite: str, out=None) -> int:
    out = out or sys.stdout
    try:
        checks = verify.run_suite(suite)
    except KeyError:
        raise UsageError(f"unknown suite {suite!r}; choose from {sorted(verify.SUITES)} or 'all'")
    for c in checks:
        out.write(c.line() + "\n")
    failed = [c for c in checks if not c.passed]
    out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
    for c in failed:
        out.write(f"failed: {c.name}\n")
    return 1 if failed else 0


def cmd_sieve_estimate(Q: int, delta, alpha=None, b=None, r=None, R=None, T=None) -> dict:
    delta = farey.exact(delta)
    if b is None or r is None:
        approx = farey.refine_approx(farey.exact(alpha if alpha is not None else 0), Q, delta)
        if approx is None:
            raise UsageError("alpha lies on a major arc; the sieve step applies to minor arcs only")
        b, r = approx
    if R is None:
        R = sieve.choose_R(Q, delta)
    bumps = sieve.make_bumps()
    est = sieve.sieve_estimate_P(b, r, Q, delta, R, bumps)
    chain = poisson.pair_sum_chain(Q, delta, b, r, R, T)
    count = farey.count_P(farey.CountWindow(Q, 2 * delta, Fraction(b, r)))
    wc = sieve.weighted_count(b, r, Q, delta, bumps)
    exact_pairs = math.fsum(est.pair_magnitudes.values())
    bt = chain.bound_terms
    chain_scale = bt["Q4_delta_R"] + bt["Q2_delta_R3"] + bt["R3"]
    return {
        "Q": Q, "delta": str(delta), "b": b, "r": r, "R": R, "P": est.P,
        "count_P_2delta": count, "weighted_count": wc,
        "term1": est.term1, "term2": est.term2, "estimate": est.estimate,
        "weight_sum_over_Q4delta": est.weight_sum / (Q**4 * float(delta)),
        "pair_sum_exact": exact_pairs, "pair_sum_dual_bound": chain.total, "dual_tail": chain.tail,
        "chain_ratio": chain.total / chain_scale if chain_scale else "",
        **{f"bound_{k}": v for k, v in bt.items()},
    }


# -- argument parsing ---------------------------------------------------------------


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()] if text else []


def _grid(args) -> list[tuple[int, int]]:
    if args.grid is not None:
        pairs = []
        for item in args.grid:
            q, _, n = item.partition(":")
            pairs.append((int(q), int(n)))
        return pairs
    Qs = [q for item in args.Q for q in _ints(item)]
    Ns = [n for item in args.N for n in _ints(item)]
    return [(q, n) for q in Qs for n in Ns]


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--Q", nargs="*", default=[], help="moduli bounds (cartesian product with --N)")
    p.add_argument("--N", nargs="*", default=[], help="polynomial lengths")
    p.add_argument("--grid", nargs="*", default=None, metavar="Q:N", help="explicit (Q, N) pairs")
    p.add_argument("--seq", nargs="+", default=["ones"],
                   help="ones | random_pm1 | unimodular | point_mass:BETA | file:PATH")
    p.add_argument("--trials", type=int, default=1, help="trials per random sequence kind")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument("--reproducible", action="store_true", help="omit the timestamp header line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sievelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lhs", help="exact square-moduli sieve sums")
    _add_experiment_flags(p)

    p = sub.add_parser("ratio-grid", help="lhs against every bound on a (Q, N) grid")
    _add_experiment_flags(p)
    p.add_argument("--bounds", nargs="+", choices=bounds.BOUND_NAMES, default=list(bounds.BOUND_NAMES))

    p = sub.add_parser("count", help="Farey point count P(alpha, delta) or its maximum")
    p.add_argument("--alpha", default="0")
    p.add_argument("--Q", type=int, default=2)
    p.add_argument("--delta", default="1e-6")
    p.add_argument("--mode", choices=("point", "max"), default="point")

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", help="identities | poisson | sieve | spacing | arcs | all")

    p = sub.add_parser("sieve-estimate", help="square sieve and dual-side chain for one minor-arc point")
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--N", type=int, help="sets delta = 1/N")
    p.add_argument("--delta")
    p.add_argument("--alpha")
    p.add_argument("--b", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--R", type=float)
    p.add_argument("--T", type=float, help="single frequency cutoff (default: measured decay)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("lhs", "ratio-grid"):
            config = ExperimentConfig(
                subcommand=args.command,
                grid=_grid(args),
                trials=args.trials,
                seed=args.seed,
                seqs=[SeqSpec.parse(s) for s in args.seq],
                bound_names=tuple(getattr(args, "bounds", bounds.BOUND_NAMES)),
                fmt=args.fmt,
                out=args.out,
                reproducible=args.reproducible,
            )
            if args.command == "lhs":
                emit(cmd_lhs(config), LHS_FIELDS, config)
            else:
                emit(cmd_ratio_grid(config), GRID_FIELDS, config)
            return 0
        if args.command == "count":
            result = cmd_count(args.alpha, args.Q, args.delta, args.mode)
            for k, v in result.items():
                print(f"{k}: {v}")
            return 0
        if args.command == "verify":
            return cmd_verify(args.suite)
        if args.command == "sieve-estimate":
            if args.N is None and args.delta is None:
                raise UsageError("give --N or --delta")
            delta = Fraction(1, args.N) if args.N is not None else args.delta
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", sieve.SieveHypothesisWarning)
                result = cmd_sieve_estimate(args.Q, delta, args.alpha, args.b, args.r, args.R, args.T)
            for k, v in result.items():
                print(f"{k}: {v}")
            return 0
    except (UsageError, ValueError, OSError) as exc:
        print(f"sievelab: error: {exc}", file=sys.stderr)
        return 2
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
