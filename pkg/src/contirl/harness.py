"""Experiment driver: estimation error, end-to-end success, and the
separation sweep, each emitting one CSV with raw untransformed columns.

Every row carries the parameters and seed needed to re-run that cell in
isolation; per-trial randomness comes from a splittable child seed built
from (seed, k, n, trial), so results do not depend on execution order or
worker count.
"""

from __future__ import annotations

import csv
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .basis import BasisSpec
from .estimate import estimate_Z, inf_norm, required_samples
from .irlcore import (
    DivergenceError,
    IrlInfeasible,
    RewardVector,
    compute_F,
    continuous_irl,
    estimate_beta,
)
from .polymdp import IRLProblem, exact_Z, gen_problem, gen_transition
from .verify import classify_reward

# salts keep the child streams of different stages disjoint
_SALT_TRIAL = 1
_SALT_BOOT = 2

ESTIMATION_HEADER = [
    "experiment", "seed", "degree", "delta", "k", "n", "trials",
    "mean_err", "std_err", "err_2std", "theory_n",
]
IRL_HEADER = [
    "experiment", "seed", "gamma", "degree", "num_actions", "c", "k_verify",
    "beta_inv", "Delta", "k", "n", "trials", "resamples", "successes",
    "delta_hat", "delta_clamped", "delta_lo", "delta_hi",
]
BETA_HEADER = [
    "experiment", "seed", "beta_inv", "gamma", "degree", "num_actions", "c",
    "k", "n", "trials", "resamples", "successes", "prop", "ci_lo", "ci_hi",
]


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "estimation"
    seeds: tuple = (1, 2, 3, 4, 5)
    k_values: tuple = (5, 15, 25)
    n_values: tuple = (500, 1000, 2000, 4000, 8000)
    gamma: float = 0.7
    c: float = 0.05
    num_actions: int = 3
    degree: int = 4
    trials: int = 64
    delta: float = 0.1
    bootstrap_resamples: int = 240
    output: str = ""
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if self.experiment not in ("estimation", "irl_success", "beta_sweep"):
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.trials < 1:
            raise ValueError("trials must be positive")


def paper_scale(cfg: ExperimentConfig) -> ExperimentConfig:
    """Restore the full protocol sizes (hundreds of trials per cell)."""
    trials = {"estimation": 320, "irl_success": 320, "beta_sweep": 160}
    return replace(cfg, trials=trials[cfg.experiment])


def child_rng(*key) -> np.random.Generator:
    """Deterministic stream from a tuple of nonnegative integers."""
    return np.random.default_rng(np.random.SeedSequence([int(x) for x in key]))


def parse_config_file(path) -> dict:
    """Flat key=value file; '#' starts a comment; lists are comma separated."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {raw.rstrip()}")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key] = value
    return out


_LIST_FIELDS = {"seeds", "k_values", "n_values"}
_INT_FIELDS = {"num_actions", "degree", "trials", "bootstrap_resamples", "workers"}
_FLOAT_FIELDS = {"gamma", "c", "delta"}


def config_from_mapping(raw: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    base = base or ExperimentConfig()
    kwargs = {}
    for key, value in raw.items():
        if value is None:
            continue
        if key in _LIST_FIELDS:
            if isinstance(value, str):
                value = tuple(int(v) for v in value.split(",") if v.strip())
            kwargs[key] = tuple(int(v) for v in value)
        elif key in _INT_FIELDS:
            kwargs[key] = int(value)
        elif key in _FLOAT_FIELDS:
            kwargs[key] = float(value)
        elif key in ("experiment", "output"):
            kwargs[key] = str(value)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return replace(base, **kwargs)


def write_csv(rows, header, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[col] for col in header])


def bootstrap_proportion_ci(outcomes: np.ndarray, resamples: int,
                            rng: np.random.Generator, level: float = 0.95):
    """Percentile bootstrap interval for the mean of a 0/1 vector."""
    outcomes = np.asarray(outcomes, dtype=float)
    n = outcomes.size
    draws = rng.integers(0, n, size=(resamples, n))
    stats = outcomes[draws].mean(axis=1)
    tail = 100.0 * (1.0 - level) / 2.0
    return (float(np.percentile(stats, tail)),
            float(np.percentile(stats, 100.0 - tail)))


def measured_Delta(problem: IRLProblem, basis: BasisSpec, k: int) -> float:
    """Largest max-row-sum norm among the exact coefficient matrices."""
    return max(exact_Z(t, basis, k).inf_norm() for t in problem.transitions)


def generate_separable_problem(num_actions: int, gamma: float, degree: int,
                               base_seed: int, basis: BasisSpec, k: int = 11,
                               c: float = 0.05, max_tries: int = 50):
    """First seed at or after ``base_seed`` whose exact-matrix LP is feasible.

    Returns (problem, beta, seed).  Feasibility of the exact LP is the
    operational test that the problem is separable at this (k, c).
    """
    for seed in range(base_seed, base_seed + max_tries):
        problem = gen_problem(num_actions, gamma, degree, seed)
        try:
            beta = estimate_beta(problem, basis, k=k, c=c)
        except (IrlInfeasible, DivergenceError):
            continue
        return problem, beta, seed
    raise IrlInfeasible(
        f"no separable problem found in {max_tries} seeds from {base_seed}")


def _estimation_cell(args):
    seed, k, n, degree, trials, basis = args
    transition = gen_transition(degree, child_rng(seed))
    exact = exact_Z(transition, basis, k)
    errs = np.empty(trials)
    for trial in range(trials):
        rng = child_rng(seed, k, n, trial, _SALT_TRIAL)
        est = estimate_Z(transition, n, k, basis, rng)
        errs[trial] = inf_norm(est.entries - exact.entries)
    return seed, k, n, errs


def run_estimation_experiment(cfg: ExperimentConfig,
                              basis: BasisSpec | None = None):
    """Estimation error against the exact matrices, one row per (seed, k, n).

    ``theory_n`` is the sample count the concentration bound prescribes to
    reach the observed mean error at confidence 1 - delta, giving the
    reference curve alongside the measurements.
    """
    basis = basis or BasisSpec()
    cells = [(seed, k, n, cfg.degree, cfg.trials, basis)
             for seed in cfg.seeds for k in cfg.k_values for n in cfg.n_values]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_estimation_cell, cells))
    else:
        results = [_estimation_cell(cell) for cell in cells]
    rows = []
    for seed, k, n, errs in results:
        mean_err = float(errs.mean())
        std_err = float(errs.std(ddof=1)) if errs.size > 1 else 0.0
        rows.append({
            "experiment": "estimation", "seed": seed, "degree": cfg.degree,
            "delta": cfg.delta, "k": k, "n": n, "trials": cfg.trials,
            "mean_err": mean_err, "std_err": std_err,
            "err_2std": 2.0 * std_err,
            "theory_n": required_samples(k, mean_err, cfg.delta),
        })
    if cfg.output:
        write_csv(rows, ESTIMATION_HEADER, cfg.output)
    return rows


def _padded(alpha: RewardVector, k: int) -> RewardVector:
    if alpha.k == k:
        return alpha
    out = np.zeros(k)
    out[:alpha.k] = alpha.alpha
    return RewardVector.from_alpha(out)


def _exact_operators(problem: IRLProblem, basis: BasisSpec, k: int):
    Zs = [exact_Z(t, basis, k, action_id=a)
          for a, t in enumerate(problem.transitions)]
    return [compute_F(Zs[0], Za, problem.gamma) for Za in Zs[1:]]


def _irl_trial(args):
    problem, basis, c, n, k, seed, trial, F_exact, k_verify = args
    rng = child_rng(seed, k, n, trial, _SALT_TRIAL)
    try:
        alpha = continuous_irl(problem, basis, c, n, k, rng=rng)
    except (IrlInfeasible, DivergenceError):
        return False
    report = classify_reward(_padded(alpha, k_verify), F_exact, basis)
    return report.correct


def run_irl_success_experiment(cfg: ExperimentConfig,
                               basis: BasisSpec | None = None):
    """Success rate of the sampled pipeline on one fixed problem.

    Success means the recovered reward's margin against the *exact*
    operators (at truncation max(k, 11), zero-padded) is positive on the
    100-point verification grid; failed solves count as failures.  Zero
    observed failures are clamped to 1/(trials+1) and flagged so the log
    transform downstream stays defined.
    """
    basis = basis or BasisSpec()
    seed = cfg.seeds[0]
    problem = gen_problem(cfg.num_actions, cfg.gamma, cfg.degree, seed)
    k_verify = max(max(cfg.k_values), 11)
    F_exact = _exact_operators(problem, basis, k_verify)
    beta_inv = 1.0 / estimate_beta(problem, basis, k=k_verify, c=cfg.c)
    delta_cap = measured_Delta(problem, basis, k_verify)
    rows = []
    for k in cfg.k_values:
        for n in cfg.n_values:
            tasks = [(problem, basis, cfg.c, n, k, seed, trial, F_exact, k_verify)
                     for trial in range(cfg.trials)]
            if cfg.workers > 1:
                with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                    outcomes = np.array(list(pool.map(_irl_trial, tasks)))
            else:
                outcomes = np.array([_irl_trial(t) for t in tasks])
            successes = int(outcomes.sum())
            failures = cfg.trials - successes
            clamped = failures == 0
            delta_hat = (1.0 / (cfg.trials + 1) if clamped
                         else failures / cfg.trials)
            boot_rng = child_rng(seed, k, n, _SALT_BOOT)
            lo, hi = bootstrap_proportion_ci(~outcomes, cfg.bootstrap_resamples,
                                             boot_rng)
            rows.append({
                "experiment": "irl_success", "seed": seed, "gamma": cfg.gamma,
                "degree": cfg.degree, "num_actions": cfg.num_actions,
                "c": cfg.c, "k_verify": k_verify, "beta_inv": beta_inv,
                "Delta": delta_cap, "k": k, "n": n, "trials": cfg.trials,
                "resamples": cfg.bootstrap_resamples,
                "successes": successes, "delta_hat": delta_hat,
                "delta_clamped": int(clamped), "delta_lo": lo, "delta_hi": hi,
            })
    if cfg.output:
        write_csv(rows, IRL_HEADER, cfg.output)
    return rows


def run_beta_experiment(cfg: ExperimentConfig,
                        basis: BasisSpec | None = None):
    """Success proportion across problems of varying separation.

    One problem per seed; seeds whose exact LP is infeasible are skipped
    with a warning.  Runs at the first configured truncation.
    """
    basis = basis or BasisSpec()
    k = cfg.k_values[0]
    k_verify = max(k, 11)
    rows = []
    for seed in cfg.seeds:
        problem = gen_problem(cfg.num_actions, cfg.gamma, cfg.degree, seed)
        try:
            beta_inv = 1.0 / estimate_beta(problem, basis, k=k_verify, c=cfg.c)
        except (IrlInfeasible, DivergenceError) as exc:
            warnings.warn(f"seed {seed} skipped (not separable): {exc}")
            continue
        F_exact = _exact_operators(problem, basis, k_verify)
        for n in cfg.n_values:
            tasks = [(problem, basis, cfg.c, n, k, seed, trial, F_exact, k_verify)
                     for trial in range(cfg.trials)]
            if cfg.workers > 1:
                with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                    outcomes = np.array(list(pool.map(_irl_trial, tasks)))
            else:
                outcomes = np.array([_irl_trial(t) for t in tasks])
            successes = int(outcomes.sum())
            boot_rng = child_rng(seed, k, n, _SALT_BOOT)
            lo, hi = bootstrap_proportion_ci(outcomes, cfg.bootstrap_resamples,
                                             boot_rng)
            rows.append({
                "experiment": "beta_sweep", "seed": seed, "beta_inv": beta_inv,
                "gamma": cfg.gamma, "degree": cfg.degree,
                "num_actions": cfg.num_actions, "c": cfg.c, "k": k, "n": n,
                "trials": cfg.trials, "resamples": cfg.bootstrap_resamples,
                "successes": successes,
                "prop": successes / cfg.trials, "ci_lo": lo, "ci_hi": hi,
            })
    if cfg.output:
        write_csv(rows, BETA_HEADER, cfg.output)
    return rows
