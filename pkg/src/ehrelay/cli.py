"""Command-line sweep runner.

    ehrelay run configs/reference.ini --sweep alpha --from 0.05 --to 0.95 \\
        --step 0.05 --eval analytic,mc --samples 1000000 --seed 42

Writes one CSV row per (sweep value, evaluator). Precedence for scenario
parameters: built-in defaults < config file < ``--set KEY=VALUE`` < the
dedicated flags (``--L``, ``--theta-p``, ``--p-peak-db``) < the swept
variable itself.

Exit codes: 0 success, 1 input error, 2 closed-form consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticConsistencyError, secondary_outage_analytic
from .montecarlo import EHMode, estimate_outage
from .optimizer import optimize_alpha
from .scenario import Scenario, ScenarioError, build_scenario, read_config

CSV_HEADER = (
    "variable", "value", "evaluator", "alpha", "L", "theta_p", "p_t_db",
    "p_out", "std_err", "alpha_star", "p_out_min", "n_samples", "seed",
)
EVALUATORS = ("analytic", "mc", "mc-baseline")
VARIABLES = ("alpha", "theta_p", "L")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple
    evaluators: tuple[str, ...]
    mc_samples: int
    seed: int
    optimize: bool
    alpha: float | None = None
    grid_step: float = 0.01

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise InputError(f"--sweep must be one of {', '.join(VARIABLES)}")
        if not self.values:
            raise InputError("sweep has no values")
        for ev in self.evaluators:
            if ev not in EVALUATORS:
                raise InputError(f"--eval: unknown evaluator {ev!r} (choose from {', '.join(EVALUATORS)})")
        if not self.evaluators:
            raise InputError("--eval: no evaluators given")
        if self.mc_samples < 1:
            raise InputError("--samples must be >= 1")
        for v in self.values:
            if self.variable == "alpha" and not 0.0 < v < 1.0:
                raise InputError(f"alpha value {v} outside (0, 1)")
            if self.variable == "theta_p" and not 0.0 <= v < 1.0:
                raise InputError(f"theta_p value {v} outside [0, 1)")
            if self.variable == "L" and (v < 1 or int(v) != v):
                raise InputError(f"L value {v} is not a positive integer")
        if self.variable == "alpha" and self.optimize:
            raise InputError("--optimize applies to theta_p and L sweeps")
        if self.variable != "alpha" and not self.optimize:
            if self.alpha is None:
                raise InputError("--alpha is required for theta_p/L sweeps without --optimize")
            if not 0.0 < self.alpha < 1.0:
                raise InputError(f"--alpha {self.alpha} outside (0, 1)")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _point_scenario(base: Scenario, variable: str, value) -> Scenario:
    if variable == "theta_p":
        return base.replace(theta_p=float(value))
    if variable == "L":
        return base.replace(num_primary_pairs=int(value))
    return base


def _evaluator(scenario: Scenario, ev: str, spec: SweepSpec):
    if ev == "analytic":
        return lambda a: secondary_outage_analytic(scenario, a)
    mode = EHMode.WITH_INTERFERENCE if ev == "mc" else EHMode.WITHOUT_INTERFERENCE
    return lambda a: estimate_outage(scenario, a, spec.mc_samples, spec.seed, mode)


def evaluate_point(job) -> dict:
    """One CSV row. Top-level so it can run in a worker process."""
    base, spec, value, ev = job
    s = _point_scenario(base, spec.variable, value)
    row = dict.fromkeys(CSV_HEADER)
    row.update(
        variable=spec.variable, value=value, evaluator=ev,
        L=s.L, theta_p=s.theta_p, p_t_db=s.power_peak_db,
    )
    is_mc = ev != "analytic"
    if is_mc:
        row.update(n_samples=spec.mc_samples, seed=spec.seed)
    evaluate = _evaluator(s, ev, spec)

    if spec.optimize:
        if is_mc:
            opt = optimize_alpha(lambda a: evaluate(a).p_hat, grid_step=spec.grid_step, refine=False)
            row["std_err"] = evaluate(opt.alpha_star).std_err
        else:
            opt = optimize_alpha(evaluate, grid_step=spec.grid_step)
        row.update(alpha_star=opt.alpha_star, p_out_min=opt.p_out_min)
        return row

    alpha = float(value) if spec.variable == "alpha" else spec.alpha
    row["alpha"] = alpha
    if is_mc:
        est = evaluate(alpha)
        row.update(p_out=est.p_hat, std_err=est.std_err)
    else:
        row["p_out"] = evaluate(alpha)
    return row


def run_sweep(base: Scenario, spec: SweepSpec, workers: int = 1) -> list[dict]:
    jobs = [(base, spec, v, ev) for v in spec.values for ev in spec.evaluators]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluate_point, jobs))  # map keeps sweep order
    return [evaluate_point(j) for j in jobs]


def write_csv(rows: list[dict], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(row[k]) if k not in ("variable", "evaluator") else row[k] for k in CSV_HEADER])


def _sweep_values(args, variable: str) -> tuple:
    if args.values:
        try:
            raw = [float(x) for x in args.values.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"--values: cannot parse {args.values!r}") from None
    elif args.start is not None and args.stop is not None and args.step is not None:
        if args.step <= 0:
            raise InputError("--step must be positive")
        if args.stop < args.start:
            raise InputError("--to must be >= --from")
        count = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
        raw = list(np.round(args.start + args.step * np.arange(count), 12))
    else:
        raise InputError("give sweep values with --values or --from/--to/--step")
    if variable == "L":
        if any(v != int(v) for v in raw):
            raise InputError("L values must be integers")
        return tuple(int(v) for v in raw)
    return tuple(float(v) for v in raw)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ehrelay", description="Secondary outage sweeps for an EH cognitive relay network.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="evaluate a sweep and write CSV")
    r.add_argument("config", help="flat key = value scenario file")
    r.add_argument("--sweep", required=True, choices=VARIABLES)
    r.add_argument("--from", dest="start", type=float)
    r.add_argument("--to", dest="stop", type=float)
    r.add_argument("--step", type=float)
    r.add_argument("--values", help="comma-separated sweep values (instead of --from/--to/--step)")
    r.add_argument("--eval", default="analytic", help="comma list from: analytic, mc, mc-baseline")
    r.add_argument("--samples", type=int, default=1_000_000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--optimize", action="store_true", help="optimize alpha per sweep point")
    r.add_argument("--alpha", type=float, help="fixed alpha for theta_p/L sweeps")
    r.add_argument("--grid-step", type=float, default=0.01, help="alpha grid step for --optimize")
    r.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    r.add_argument("--L", dest="L", type=int)
    r.add_argument("--theta-p", dest="theta_p", type=float)
    r.add_argument("--p-peak-db", dest="p_peak_db", type=float)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out", help="CSV path (default: stdout)")
    return p


def _scenario_from_args(args) -> Scenario:
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        raise InputError(f"config: cannot read {args.config}: {exc.strerror}") from None
    for item in args.set:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--set expects KEY=VALUE, got {item!r}")
        cfg[key.strip()] = val.strip()
    for key in ("L", "theta_p", "p_peak_db"):
        if getattr(args, key) is not None:
            cfg[key] = str(getattr(args, key))
    return build_scenario(cfg)[0]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        base = _scenario_from_args(args)
        spec = SweepSpec(
            variable=args.sweep,
            values=_sweep_values(args, args.sweep),
            evaluators=tuple(e.strip() for e in args.eval.split(",") if e.strip()),
            mc_samples=args.samples,
            seed=args.seed,
            optimize=args.optimize,
            alpha=args.alpha,
            grid_step=args.grid_step,
        )
        # surface invalid sweep points (e.g. theta_p = 1) before any work
        for v in spec.values:
            _point_scenario(base, spec.variable, v)
        rows = run_sweep(base, spec, workers=args.workers)
    except (InputError, ScenarioError) as exc:
        print(f"ehrelay: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalyticConsistencyError as exc:
        print(f"ehrelay: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    buf = io.StringIO()
    write_csv(rows, buf)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
