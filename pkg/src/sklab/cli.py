"""Command line entry point: ``sklab {simulate,metric,verify-main10,experiment}``."""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness, theorem_lab
from .limits import DEFAULT_TRUNCATION, sample_poisson_atoms
from .paths import StepPath, n_steps, prw_trajectory, scale
from .skorokhod import DEFAULT_TOL, distance
from .tails import model_from_dict, norming_a


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def cmd_simulate(args) -> int:
    model = model_from_dict(json.loads(args.model))
    os.makedirs(args.out, exist_ok=True)
    K = n_steps(args.n, args.horizon)
    a = 1.0 if args.raw else norming_a(model, args.n)
    for rep in range(args.paths):
        rng = harness.replicate_rng(args.seed, 0, rep)
        xi, eta = model.sample(rng, K + 1)
        traj = prw_trajectory(np.column_stack((xi, eta)), args.n, args.horizon)
        for name in ("walk", "prw_max", "perp"):
            scale(getattr(traj, name), a).to_csv(os.path.join(args.out, f"{name}_{rep}.csv"))
        if args.atoms:
            atoms = sample_poisson_atoms(model.limit_measure(), args.horizon, args.truncation,
                                         harness.replicate_rng(args.seed, 1, rep))
            atoms.to_csv(os.path.join(args.out, f"atoms_{rep}.csv"))
    print(f"wrote {args.paths} path set(s) to {args.out} (n={args.n}, norming={a:.6g})")
    return 0


def cmd_metric(args) -> int:
    p = StepPath.from_csv(args.first)
    q = StepPath.from_csv(args.second)
    d = distance(p, q, args.mode, args.tol)
    print(json.dumps({"mode": args.mode, "tol": args.tol, "distance": d}))
    return 0


def cmd_verify(args) -> int:
    inst = theorem_lab.get_family(args.family)
    report = theorem_lab.verify_main10(inst, args.n_list, args.tol)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text)
    return 0 if report["pass"] else 1


def cmd_experiment(args) -> int:
    cfg = harness.ExperimentConfig.load(args.config)
    report = harness.run_experiment(cfg)
    out = args.out or cfg.output_path
    if out:
        harness.write_report(report, out)
    for row in report.results:
        flag = "PASS" if row["pass"] else "FAIL"
        print(f"t={row['eval_time']:<6g} ks={row['ks']:.4f} threshold={row['threshold']:.4f} {flag}")
    for name, ok in report.checks.items():
        print(f"check {name}: {'PASS' if ok else 'FAIL'}")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sklab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="write scaled walk / max / perpetuity paths as CSV")
    s.add_argument("--model", required=True, help="model as JSON, e.g. '{\"variant\": \"linear\", \"alpha\": 0.8}'")
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--horizon", type=float, default=1.0)
    s.add_argument("--paths", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--raw", action="store_true", help="skip division by a(n)")
    s.add_argument("--atoms", action="store_true", help="also write limit atoms")
    s.add_argument("--truncation", type=float, default=DEFAULT_TRUNCATION)
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_simulate)

    m = sub.add_parser("metric", help="distance between two step-path CSVs")
    m.add_argument("first")
    m.add_argument("second")
    m.add_argument("--mode", choices=("m1", "j1", "uniform"), default="m1")
    m.add_argument("--tol", type=float, default=DEFAULT_TOL)
    m.set_defaults(func=cmd_metric)

    v = sub.add_parser("verify-main10", help="M1/J1 convergence table for a built-in family")
    v.add_argument("--family", choices=sorted(theorem_lab.FAMILIES), default="counterexample")
    v.add_argument("--n-list", type=_int_list, default=[10, 100, 1000])
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a Monte Carlo experiment from a JSON config")
    e.add_argument("--config", required=True)
    e.add_argument("--out", help="report path (overrides output_path in the config)")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"sklab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
