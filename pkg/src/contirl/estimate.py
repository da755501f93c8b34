"""Sampled estimation of transition coefficient matrices, plus the
sample-size and truncation-bound calculators that go with it.

The estimator draws starting states uniformly on [-1, 1], samples the
one-step transition, and averages 2 * phi(s') phi(s_bar)^T; orthonormality
of the basis makes every truncated entry unbiased.  ``required_samples``
gives the Hoeffding sample count under which the max-row-sum error of the
k x k estimate stays below epsilon with probability 1 - delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, eval_phi_matrix

ZETA2 = math.pi**2 / 6.0
ZETA3 = 1.2020569031595943  # Apery's constant, float64

_CHUNK = 1 << 16


class InfeasibleRegimeError(ValueError):
    """Raised when sample-complexity preconditions cannot be met."""


def inf_norm(entries: np.ndarray) -> float:
    """Induced infinity norm: maximum absolute row sum."""
    return float(np.max(np.sum(np.abs(entries), axis=1)))


@dataclass(frozen=True)
class CoeffMatrix:
    """k x k truncation of a transition coefficient matrix."""

    k: int
    entries: np.ndarray
    provenance: str  # "exact" or "estimated"
    action_id: int = -1

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", e)
        if e.shape != (self.k, self.k):
            raise ValueError(f"entries must be {self.k}x{self.k}, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("entries must all be finite")
        if self.provenance not in ("exact", "estimated"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def inf_norm(self) -> float:
        return inf_norm(self.entries)


@dataclass(frozen=True)
class EstimationPlan:
    """Target error/failure-probability pair with its sample count."""

    k: int
    epsilon: float
    delta: float
    n: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.n < 1:
            raise ValueError("n must be a positive integer")

    @classmethod
    def for_target(cls, k: int, epsilon: float, delta: float) -> "EstimationPlan":
        return cls(k=k, epsilon=epsilon, delta=delta,
                   n=required_samples(k, epsilon, delta))


def estimate_Z(t, n: int, k: int, basis: BasisSpec, rng: np.random.Generator,
               action_id: int = -1) -> CoeffMatrix:
    """Monte Carlo estimate of the k x k coefficient matrix from n samples.

    ``t`` provides one-step sampling through ``t.sample(s, rng)``.  Each
    summand is 2 * phi(s') phi(s_bar)^T, so every entry lies in [-2, 2].
    Deterministic for a fixed rng state.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if k < 1:
        raise ValueError("k must be a positive integer")
    acc = np.zeros((k, k))
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        s_bar = 2.0 * rng.random(m) - 1.0
        s_next = t.sample(s_bar, rng)
        phi_next = eval_phi_matrix(basis, k, s_next)
        phi_bar = eval_phi_matrix(basis, k, s_bar)
        acc += phi_next.T @ phi_bar
        done += m
    return CoeffMatrix(k=k, entries=(2.0 / n) * acc,
                       provenance="estimated", action_id=action_id)


def required_samples(k: int, epsilon: float, delta: float) -> int:
    """Samples sufficient for max-row-sum error epsilon with confidence 1-delta.

    Ceiling of (8 k^2 / epsilon^2) * ln(2 k^2 / delta); natural log, since
    the underlying Hoeffding bound is in base e.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil((8.0 * k * k / (epsilon * epsilon))
                     * math.log(2.0 * k * k / delta))


def required_samples_irl(k: int, beta: float, c: float, rho: float, gamma: float,
                         Delta: float, num_actions: int, delta: float) -> int:
    """End-to-end sample count for the full reward-recovery pipeline.

    Requires beta > c*rho and gamma*Delta < 1/2; outside that regime the
    guarantee is vacuous and InfeasibleRegimeError is raised.
    """
    if k < 1 or num_actions < 2:
        raise ValueError("need k >= 1 and num_actions >= 2")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if beta <= 0 or c <= 0 or rho <= 0 or Delta <= 0 or not 0.0 <= gamma < 1.0:
        raise ValueError("beta, c, rho, Delta must be positive and gamma in [0, 1)")
    if beta <= c * rho:
        raise InfeasibleRegimeError(
            f"separation margin beta={beta} does not exceed c*rho={c * rho}")
    if gamma * Delta >= 0.5:
        raise InfeasibleRegimeError(
            f"gamma*Delta={gamma * Delta} must be < 1/2")
    lead = max(32.0, 512.0 / ((beta - c * rho) ** 2 * (0.5 - gamma * Delta) ** 4))
    return math.ceil(lead * k * k * math.log(2.0 * k * k * num_actions / delta))


def truncation_error_bound(Delta: float, k: int) -> float:
    """Upper bound on the max-row-sum mass outside the k x k truncation.

    Valid whenever entries decay like Delta / (zeta(3) i^3 j^3); combines
    a Hurwitz-zeta tail bound with the direct 1/(k+1)^3 row bound and is
    strictly decreasing in k.
    """
    if Delta <= 0:
        raise ValueError("Delta must be positive")
    if k < 1:
        raise ValueError("k must be a positive integer")
    kp1 = k + 1.0
    hurwitz = math.exp(2.0 / kp1) / (2.0 * ZETA3 * kp1 * kp1)
    return Delta * max(hurwitz, 1.0 / kp1**3)


def min_truncation_k(Delta: float, epsilon: float) -> int:
    """Smallest k whose truncation bound is at most epsilon.

    Doubling search for an upper bracket, then bisection; scales like
    sqrt(Delta / epsilon).
    """
    if Delta <= 0 or epsilon <= 0:
        raise ValueError("Delta and epsilon must be positive")
    if truncation_error_bound(Delta, 1) <= epsilon:
        return 1
    lo, hi = 1, 2
    while truncation_error_bound(Delta, hi) > epsilon:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if truncation_error_bound(Delta, mid) <= epsilon:
            hi = mid
        else:
            lo = mid
    return hi


def fourier_rho(Delta: float) -> float:
    """Lipschitz bound on the Bellman-margin function over the trig basis.

    Equals 4 * pi * Delta * zeta(2) / zeta(3); linear in Delta.
    """
    if Delta <= 0:
        raise ValueError("Delta must be positive")
    return 4.0 * math.pi * Delta * ZETA2 / ZETA3
