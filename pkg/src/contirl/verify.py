"""Independent checks on recovered rewards.

``classify_reward`` evaluates the Bellman margin on an evenly spaced grid
(independent of the covering set the LP trained on) and calls the reward
correct only when the margin is strictly positive everywhere.
``empirical_returns`` re-derives the same ordering by brute force: Monte
Carlo rollouts of the discounted reward, action by action.
``quadrature_Z`` recomputes coefficient matrices by tensor quadrature so
the closed-form path has a numerical cross-check that shares none of its
code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .basis import BasisSpec, eval_phi_matrix
from .estimate import CoeffMatrix
from .irlcore import FMatrix, RewardVector
from .polymdp import IRLProblem, PolyTransition

CSV_HEADER = "verdict,min_margin,grid_size,k,num_operators,per_action_margins"


@dataclass(frozen=True)
class VerificationReport:
    """Margin summary over the verification grid."""

    min_margin: float
    verdict: str
    grid_size: int
    per_action_margins: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "per_action_margins",
            np.asarray(self.per_action_margins, dtype=float))
        want = "correct" if self.min_margin > 0.0 else "incorrect"
        if self.verdict != want:
            raise ValueError("verdict inconsistent with min_margin")

    @property
    def correct(self) -> bool:
        return self.verdict == "correct"

    def csv_row(self, k: int) -> str:
        margins = "|".join(format(m, ".17g") for m in self.per_action_margins)
        return ",".join([
            self.verdict,
            format(self.min_margin, ".17g"),
            str(self.grid_size),
            str(k),
            str(self.per_action_margins.size),
            margins,
        ])


class ActionReturns(NamedTuple):
    means: np.ndarray
    std_errs: np.ndarray


def classify_reward(alpha: RewardVector, F_list, basis: BasisSpec,
                    grid_size: int = 100) -> VerificationReport:
    """Strict-positivity verdict of the Bellman margin on an even grid.

    A zero minimum margin is classified incorrect: the optimality of
    action 0 must be strict.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    if not F_list:
        raise ValueError("need at least one operator")
    for F in F_list:
        if F.k != alpha.k:
            raise ValueError(
                f"dimension mismatch: alpha has k={alpha.k}, operator k={F.k}")
    grid = np.linspace(-1.0, 1.0, grid_size)
    phi = eval_phi_matrix(basis, alpha.k, grid)
    per_action = np.array([
        float(np.min(phi @ (F.entries.T @ alpha.alpha))) for F in F_list
    ])
    min_margin = float(np.min(per_action))
    verdict = "correct" if min_margin > 0.0 else "incorrect"
    return VerificationReport(min_margin=min_margin, verdict=verdict,
                              grid_size=grid_size, per_action_margins=per_action)


def empirical_returns(problem: IRLProblem, alpha: RewardVector,
                      basis: BasisSpec, s0: float, horizon: int,
                      rollouts: int, rng: np.random.Generator) -> ActionReturns:
    """Mean discounted return of each first action from a single start state.

    The first step follows the probed action, every later step follows
    action 0.  The sum runs over steps 1..horizon (the start-state reward
    is constant across actions and irrelevant to the ranking).
    """
    if horizon < 1 or rollouts < 1:
        raise ValueError("horizon and rollouts must be positive")
    gamma = problem.gamma
    means = np.empty(problem.num_actions)
    ses = np.empty(problem.num_actions)
    for a in range(problem.num_actions):
        s = np.full(rollouts, float(s0))
        total = np.zeros(rollouts)
        for r in range(1, horizon + 1):
            act = a if r == 1 else 0
            s = problem.transitions[act].sample(s, rng)
            total += gamma**r * (eval_phi_matrix(basis, alpha.k, s) @ alpha.alpha)
        means[a] = total.mean()
        ses[a] = total.std(ddof=1) / np.sqrt(rollouts)
    return ActionReturns(means=means, std_errs=ses)


def multistep_coeffs(Z_seq) -> np.ndarray:
    """Coefficient matrix of the multi-step transition density.

    ``Z_seq`` lists the per-step matrices in execution order; the result
    is their product with later steps multiplied on the left, so that
    phi(s_r)^T M phi(s_0) reconstructs the r-step density.
    """
    if not Z_seq:
        raise ValueError("need at least one matrix")
    k = Z_seq[0].k
    if any(Z.k != k for Z in Z_seq):
        raise ValueError("all matrices must share the same truncation")
    M = Z_seq[0].entries.copy()
    for Z in Z_seq[1:]:
        M = Z.entries @ M
    return M


def gauss_legendre_rule(num_nodes: int):
    """Nodes and weights on [-1, 1]."""
    if num_nodes < 1:
        raise ValueError("num_nodes must be positive")
    return np.polynomial.legendre.leggauss(num_nodes)


def quadrature_Z(t: PolyTransition, basis: BasisSpec, k: int,
                 num_nodes: int | None = None, action_id: int = -1) -> CoeffMatrix:
    """Coefficient matrix by tensor quadrature of the raw density.

    Independent of the closed-form moment path: the density is evaluated
    pointwise on a tensor grid.  64 nodes are spectrally exact for the
    polynomial-times-trigonometric integrands that arise here; 128 are
    used for unusually high polynomial degree.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if num_nodes is None:
        degree = max(t.pa.degree, t.pb.degree) + 2
        num_nodes = 64 if degree <= 40 else 128
    nodes, weights = gauss_legendre_rule(num_nodes)
    pdf = t.pdf(nodes[:, None], nodes[None, :])  # [p, q] = P(nodes_p | nodes_q)
    phi = eval_phi_matrix(basis, k, nodes)
    entries = (phi * weights[:, None]).T @ pdf @ (phi * weights[:, None])
    return CoeffMatrix(k=k, entries=entries, provenance="exact",
                       action_id=action_id)
