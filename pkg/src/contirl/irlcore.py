"""Reward recovery over a covering set.

For each non-optimal action the Bellman difference operator

    F = sum_r gamma^r T^r (T - Z_a),        T = coefficient matrix of action 0,

is obtained as the solution of (I - gamma T) X = T - Z_a.  Positivity of
alpha . F phi(s) over the whole interval certifies that action 0 is
strictly optimal under the reward sum_i alpha_i phi_i; the linear program
enforces a margin of at least 1 on a finite covering grid while
minimising the l1 norm of alpha, which by Lipschitz continuity of the
margin extends positivity to every state whenever the covering step is
small enough relative to the separation of the problem.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, eval_phi_matrix
from .estimate import CoeffMatrix, estimate_Z, inf_norm
from .polymdp import IRLProblem, exact_Z
from .simplex import (
    LPInfeasibleError,
    certificate_residuals,
    solve_inequality_lp,
)

_CERT_TOL = 1e-8
_SERIES_CUTOFF = 1e-12


class IrlInfeasible(Exception):
    """The margin LP has no feasible reward vector at this (k, c, n)."""


class DivergenceError(ValueError):
    """The discounted operator series does not converge."""


@dataclass(frozen=True)
class FMatrix:
    """k x k Bellman difference operator for one non-optimal action."""

    k: int
    entries: np.ndarray
    action_id: int
    gamma: float

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", e)
        if e.shape != (self.k, self.k):
            raise ValueError(f"entries must be {self.k}x{self.k}, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("entries must all be finite")


@dataclass(frozen=True)
class CoveringSet:
    """Midpoint grid with covering radius at most c/2."""

    c: float
    points: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))


@dataclass(frozen=True)
class RewardVector:
    """Coefficients of a reward function over the first k basis members."""

    k: int
    alpha: np.ndarray
    l1_norm: float

    def __post_init__(self) -> None:
        a = np.asarray(self.alpha, dtype=float)
        object.__setattr__(self, "alpha", a)
        if a.shape != (self.k,):
            raise ValueError(f"alpha must have length {self.k}, got {a.shape}")
        if abs(self.l1_norm - float(np.sum(np.abs(a)))) > 1e-12:
            raise ValueError("cached l1_norm disagrees with alpha")

    @classmethod
    def from_alpha(cls, alpha) -> "RewardVector":
        a = np.asarray(alpha, dtype=float)
        return cls(k=a.size, alpha=a, l1_norm=float(np.sum(np.abs(a))))

    def eval(self, basis: BasisSpec, s):
        """Reward value(s) at state(s) s."""
        arr = np.atleast_1d(np.asarray(s, dtype=float))
        vals = eval_phi_matrix(basis, self.k, arr) @ self.alpha
        return float(vals[0]) if np.isscalar(s) or np.asarray(s).ndim == 0 else vals


def save_reward(reward: RewardVector, path) -> None:
    """One coefficient per line, 17 significant digits."""
    with open(path, "w") as fh:
        for a in reward.alpha:
            fh.write(format(float(a), ".17g") + "\n")


def load_reward(path) -> RewardVector:
    with open(path) as fh:
        vals = [float(ln.strip()) for ln in fh if ln.strip()]
    return RewardVector.from_alpha(np.array(vals))


@dataclass(frozen=True)
class LPStandardForm:
    """Margin LP in split-variable form: alpha = u - v with u, v >= 0.

    Each covering point / non-optimal action pair contributes one row
    [g, -g] where g is the margin gradient in alpha; the objective sums
    u + v, whose optimum equals the minimal l1 norm.
    """

    num_vars: int
    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    sense: str = ">="


def compute_F(T: CoeffMatrix, Za: CoeffMatrix, gamma: float,
              method: str = "solve", strict_norm_check: bool = False) -> FMatrix:
    """Bellman difference operator from two coefficient matrices.

    ``method="solve"`` returns the solution of (I - gamma T) X = T - Za,
    which equals the limit of the discounted series whenever the spectral
    radius of gamma*T is below 1 (always the case for exact matrices of a
    valid transition, whose leading eigenvalue is 1).  ``method="series"``
    accumulates the series directly and requires the stronger contraction
    gamma * ||T||_inf < 1 so its stopping rule is sound.

    ``strict_norm_check`` additionally rejects gamma * ||T||_inf >= 1 in
    both modes; exact matrices of typical dense transitions violate that
    sufficient condition while the series still converges, so it is off
    by default.
    """
    if T.k != Za.k:
        raise ValueError(f"matrix sizes differ: {T.k} vs {Za.k}")
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma}")
    norm_T = T.inf_norm()
    if strict_norm_check and gamma > 0.0 and norm_T >= 1.0 / gamma:
        raise DivergenceError(
            f"||T||_inf = {norm_T:.6g} is not below 1/gamma = {1.0 / gamma:.6g}")
    diff = T.entries - Za.entries
    if gamma == 0.0:
        return FMatrix(k=T.k, entries=diff, action_id=Za.action_id, gamma=gamma)
    if method == "solve":
        spectral = float(np.max(np.abs(np.linalg.eigvals(T.entries))))
        if gamma * spectral >= 1.0 - 1e-9:
            raise DivergenceError(
                f"spectral radius of gamma*T is {gamma * spectral:.6g} >= 1")
        lhs = np.eye(T.k) - gamma * T.entries
        entries = np.linalg.solve(lhs, diff)
    elif method == "series":
        if gamma * norm_T >= 1.0:
            raise DivergenceError(
                "series mode needs gamma * ||T||_inf < 1 for its stopping rule")
        norm_diff = inf_norm(diff)
        total = diff.copy()
        term = diff
        coeff = norm_diff
        while True:
            coeff *= gamma * norm_T
            if coeff < _SERIES_CUTOFF:
                break
            term = gamma * (T.entries @ term)
            total += term
        entries = total
    else:
        raise ValueError(f"unknown method {method!r}")
    return FMatrix(k=T.k, entries=entries, action_id=Za.action_id, gamma=gamma)


def covering_set(c: float) -> CoveringSet:
    """Midpoint grid of ceil(2/c) points covering [-1, 1] with radius <= c/2."""
    if c <= 0:
        raise ValueError(f"cover parameter must be positive, got {c}")
    if c > 2.0:
        warnings.warn(f"cover parameter {c} exceeds the interval width; using 2")
        c = 2.0
    count = math.ceil(2.0 / c)
    points = -1.0 + (2.0 * np.arange(1, count + 1) - 1.0) / count
    return CoveringSet(c=c, points=points)


def build_lp(F_list, cover: CoveringSet, basis: BasisSpec) -> LPStandardForm:
    """Assemble the margin LP over all covering points and actions.

    Row ordering is action-major: all covering points of the first
    non-optimal action, then the next action, and so on.
    """
    if not F_list:
        raise ValueError("need at least one non-optimal action")
    k = F_list[0].k
    if any(F.k != k for F in F_list):
        raise ValueError("all operators must share the same truncation")
    phi = eval_phi_matrix(basis, k, cover.points)  # (N, k)
    blocks = []
    for F in F_list:
        g = phi @ F.entries.T  # row s_bar holds the margin gradient F phi(s_bar)
        blocks.append(np.hstack([g, -g]))
    constraint = np.vstack(blocks)
    rows = constraint.shape[0]
    return LPStandardForm(
        num_vars=2 * k,
        objective=np.ones(2 * k),
        constraint_matrix=constraint,
        rhs=np.ones(rows),
    )


def solve_lp(lp: LPStandardForm) -> RewardVector:
    """Minimal-l1 reward vector satisfying every margin constraint.

    Raises IrlInfeasible when no reward meets the margins.  The result is
    certified: primal/dual feasibility, duality gap, and complementary
    slackness must all be ~0, and the objective must equal the l1 norm of
    the recovered alpha.
    """
    try:
        res = solve_inequality_lp(lp.objective, lp.constraint_matrix, lp.rhs)
    except LPInfeasibleError as exc:
        raise IrlInfeasible(str(exc)) from exc
    k = lp.num_vars // 2
    alpha = res.x[:k] - res.x[k:]
    reward = RewardVector.from_alpha(alpha)
    scale = max(1.0, abs(res.objective))
    resid = certificate_residuals(lp.objective, lp.constraint_matrix, lp.rhs, res)
    if max(resid.values()) > _CERT_TOL * scale:
        raise RuntimeError(f"optimality certificate failed: {resid}")
    if abs(res.objective - reward.l1_norm) > _CERT_TOL * scale:
        raise RuntimeError("LP objective does not match the recovered l1 norm")
    return reward


def continuous_irl(problem: IRLProblem, basis: BasisSpec, c: float, n,
                   k: int, rng: np.random.Generator | None = None,
                   exact: bool = False) -> RewardVector:
    """Full pipeline: estimate coefficients, build operators, solve the LP.

    ``n=None`` (or ``exact=True``) substitutes exact coefficient matrices
    for the sampled estimates, which removes all sampling error and needs
    no rng.  Deterministic for a fixed seed.
    """
    if n is None:
        exact = True
    if not exact and rng is None:
        raise ValueError("sampled mode needs an rng")
    Zs = []
    for aid, t in enumerate(problem.transitions):
        if exact:
            Zs.append(exact_Z(t, basis, k, action_id=aid))
        else:
            Zs.append(estimate_Z(t, int(n), k, basis, rng, action_id=aid))
    T = Zs[0]
    F_list = [compute_F(T, Za, problem.gamma) for Za in Zs[1:]]
    lp = build_lp(F_list, covering_set(c), basis)
    return solve_lp(lp)


def estimate_beta(problem: IRLProblem, basis: BasisSpec, k: int = 11,
                  c: float = 0.05, norm: str = "l1") -> float:
    """Separation margin of the problem, from the exact-matrix LP.

    The margin LP normalises the covering-point margin to 1, so the
    separation of the instantiated problem is approximately the
    reciprocal norm of the solution.  ``norm="l1"`` matches the unit-l1
    normalisation in the separability definition; ``norm="linf"`` is the
    reciprocal max-coefficient variant.
    """
    alpha = continuous_irl(problem, basis, c, None, k, exact=True)
    if norm == "l1":
        return 1.0 / alpha.l1_norm
    if norm == "linf":
        return 1.0 / float(np.max(np.abs(alpha.alpha)))
    raise ValueError(f"unknown norm {norm!r}")
