"""Composition of one-dimensional solutions for product-form dynamics.

When the transition density of a d-dimensional problem factors across an
ordered list of coordinate subspaces, every component problem can be
solved on its own and the component rewards summed: the summed reward
makes action 0 optimal for the joint process.  Components are restricted
to one dimension each here; the projection is plain coordinate slicing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec
from .irlcore import (
    DivergenceError,
    IrlInfeasible,
    RewardVector,
    continuous_irl,
)
from .polymdp import IRLProblem


@dataclass(frozen=True)
class DecomposedProblem:
    """Ordered list of component problems sharing actions and discount."""

    components: tuple
    dims: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.components) != len(self.dims):
            raise ValueError("one dimension entry per component is required")
        if not self.components:
            raise ValueError("need at least one component")
        if any(d != 1 for d in self.dims):
            raise ValueError("only one-dimensional components are supported")
        first = self.components[0]
        for p in self.components[1:]:
            if p.num_actions != first.num_actions:
                raise ValueError("components must share the action set")
            if p.gamma != first.gamma:
                raise ValueError("components must share the discount factor")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


@dataclass(frozen=True)
class ComposedReward:
    """Sum of component rewards evaluated at projected coordinates."""

    component_rewards: tuple
    dims: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "component_rewards", tuple(self.component_rewards))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.component_rewards) != len(self.dims):
            raise ValueError("one dimension entry per component reward is required")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


def solve_decomposed(p: DecomposedProblem, basis: BasisSpec, c: float, n,
                     k: int, rng: np.random.Generator | None = None,
                     exact: bool = False) -> ComposedReward:
    """Solve every component independently and compose the rewards.

    Component failures are re-raised with the component index prepended.
    """
    rewards = []
    for j, comp in enumerate(p.components):
        try:
            rewards.append(continuous_irl(comp, basis, c, n, k, rng=rng,
                                          exact=exact))
        except (IrlInfeasible, DivergenceError) as exc:
            raise type(exc)(f"component {j}: {exc}") from exc
    return ComposedReward(component_rewards=tuple(rewards), dims=p.dims)


def eval_composed(r: ComposedReward, basis: BasisSpec, s_vec) -> float:
    """Composed reward at a full state vector (one coordinate per component)."""
    s = np.asarray(s_vec, dtype=float).ravel()
    if s.size != r.total_dim:
        raise ValueError(f"state has {s.size} coordinates, expected {r.total_dim}")
    total = 0.0
    pos = 0
    for reward, d in zip(r.component_rewards, r.dims):
        total += reward.eval(basis, float(s[pos]))
        pos += d
    return total
