"""Command-line front end.

Subcommands: ``gen`` writes a random problem file, ``solve`` recovers a
reward from a problem file, and ``estimate`` / ``irl`` / ``beta`` run the
experiment drivers.  Exit codes: 0 on success, 2 when the margin LP is
infeasible, 1 on any other error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .basis import BasisSpec
from .harness import (
    ExperimentConfig,
    config_from_mapping,
    generate_separable_problem,
    parse_config_file,
    run_beta_experiment,
    run_estimation_experiment,
    run_irl_success_experiment,
    paper_scale,
)
from .irlcore import IrlInfeasible, continuous_irl, estimate_beta, save_reward
from .polymdp import gen_problem, load_problem, save_problem

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--k-values", dest="k_values", help="comma-separated k grid")
    p.add_argument("--n-values", dest="n_values", help="comma-separated n grid")
    p.add_argument("--gamma", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--num-actions", dest="num_actions", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--bootstrap-resamples", dest="bootstrap_resamples", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", dest="output", required=True, help="output CSV path")
    p.add_argument("--paper-scale", action="store_true",
                   help="restore full per-cell trial counts")


def _experiment_config(args, experiment: str) -> ExperimentConfig:
    cfg = ExperimentConfig(experiment=experiment)
    if args.config:
        cfg = config_from_mapping(parse_config_file(args.config), cfg)
    overrides = {key: getattr(args, key, None) for key in (
        "seeds", "k_values", "n_values", "gamma", "c", "num_actions",
        "degree", "trials", "delta", "bootstrap_resamples", "workers",
        "output")}
    cfg = config_from_mapping({k: v for k, v in overrides.items()
                               if v is not None}, cfg)
    cfg = config_from_mapping({"experiment": experiment}, cfg)
    if args.paper_scale:
        cfg = paper_scale(cfg)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contirl")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="write a random problem file")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--num-actions", type=int, default=3)
    p_gen.add_argument("--gamma", type=float, default=0.7)
    p_gen.add_argument("--degree", type=int, default=4)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--separable", action="store_true",
                       help="advance the seed until the exact LP is feasible")
    p_gen.add_argument("--k", type=int, default=11)
    p_gen.add_argument("--c", type=float, default=0.05)

    p_solve = sub.add_parser("solve", help="recover a reward from a problem file")
    p_solve.add_argument("--problem", required=True)
    p_solve.add_argument("--k", type=int, default=5)
    p_solve.add_argument("--c", type=float, default=0.05)
    p_solve.add_argument("--n", type=int, help="sample count; omit for exact mode")
    p_solve.add_argument("--exact", action="store_true")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--out", required=True, help="reward coefficient file")

    for name in ("estimate", "irl", "beta"):
        _add_experiment_flags(sub.add_parser(name, help=f"run the {name} experiment"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    basis = BasisSpec()
    if args.command == "gen":
        if args.separable:
            problem, beta, seed = generate_separable_problem(
                args.num_actions, args.gamma, args.degree, args.seed, basis,
                k=args.k, c=args.c)
            print(f"seed {seed}: separation 1/beta = {1.0 / beta:.4g}")
        else:
            problem = gen_problem(args.num_actions, args.gamma, args.degree,
                                  args.seed)
        save_problem(problem, args.out)
        print(f"wrote {args.out}")
        return EXIT_OK
    if args.command == "solve":
        problem = load_problem(args.problem)
        exact = args.exact or args.n is None
        rng = None if exact else np.random.default_rng(args.seed)
        reward = continuous_irl(problem, basis, args.c, None if exact else args.n,
                                args.k, rng=rng, exact=exact)
        save_reward(reward, args.out)
        print(f"wrote {args.out} (l1 norm {reward.l1_norm:.6g})")
        return EXIT_OK
    runners = {
        "estimate": ("estimation", run_estimation_experiment),
        "irl": ("irl_success", run_irl_success_experiment),
        "beta": ("beta_sweep", run_beta_experiment),
    }
    experiment, runner = runners[args.command]
    cfg = _experiment_config(args, experiment)
    rows = runner(cfg, basis)
    if not rows:
        print("no feasible cells produced", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"wrote {cfg.output} ({len(rows)} rows)")
    return EXIT_OK


def entry() -> None:
    try:
        code = main()
    except IrlInfeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        code = EXIT_INFEASIBLE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_ERROR
    sys.exit(code)


if __name__ == "__main__":
    entry()
