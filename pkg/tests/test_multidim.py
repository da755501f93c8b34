"""Tests for product-form composition of one-dimensional solutions."""

import numpy as np
import pytest

from contirl import (
    ComposedReward,
    DecomposedProblem,
    IrlInfeasible,
    RewardVector,
    continuous_irl,
    eval_composed,
    gen_problem,
    solve_decomposed,
)


def _decomposed(seeds, gamma=0.7, actions=3):
    comps = tuple(gen_problem(actions, gamma, 4, s) for s in seeds)
    return DecomposedProblem(components=comps, dims=(1,) * len(seeds))


class TestDecomposedProblem:
    def test_mismatched_actions_rejected(self):
        a = gen_problem(3, 0.7, 4, 1)
        b = gen_problem(2, 0.7, 4, 2)
        with pytest.raises(ValueError):
            DecomposedProblem(components=(a, b), dims=(1, 1))

    def test_mismatched_gamma_rejected(self):
        a = gen_problem(3, 0.7, 4, 1)
        b = gen_problem(3, 0.5, 4, 2)
        with pytest.raises(ValueError):
            DecomposedProblem(components=(a, b), dims=(1, 1))

    def test_multidimensional_components_unsupported(self):
        a = gen_problem(3, 0.7, 4, 1)
        with pytest.raises(ValueError):
            DecomposedProblem(components=(a,), dims=(2,))


class TestSolveDecomposed:
    def test_single_component_matches_direct_solve(self, basis):
        dec = _decomposed([23])
        composed = solve_decomposed(dec, basis, 0.05, None, 11, exact=True)
        direct = continuous_irl(dec.components[0], basis, 0.05, None, 11,
                                exact=True)
        np.testing.assert_array_equal(
            composed.component_rewards[0].alpha, direct.alpha)

    def test_identical_components_identical_rewards(self, basis):
        dec = _decomposed([23, 23])
        composed = solve_decomposed(dec, basis, 0.05, None, 11, exact=True)
        np.testing.assert_array_equal(composed.component_rewards[0].alpha,
                                      composed.component_rewards[1].alpha)

    def test_component_failure_is_tagged(self, basis, uniform_density):
        from contirl import IRLProblem, PolyTransition
        t = PolyTransition(pa=uniform_density, pb=uniform_density)
        unsolvable = IRLProblem(transitions=(t, t), gamma=0.0)
        dec = DecomposedProblem(
            components=(gen_problem(2, 0.0, 4, 23), unsolvable), dims=(1, 1))
        with pytest.raises(IrlInfeasible, match="component 1"):
            solve_decomposed(dec, basis, 0.05, None, 5, exact=True)


class TestEvalComposed:
    def test_zero_components(self, basis):
        r = ComposedReward(component_rewards=(
            RewardVector.from_alpha(np.zeros(3)),
            RewardVector.from_alpha(np.zeros(3))), dims=(1, 1))
        assert eval_composed(r, basis, [0.3, -0.8]) == 0.0

    def test_single_active_component(self, basis):
        active = RewardVector.from_alpha(np.array([0.5, -1.0, 0.25]))
        r = ComposedReward(component_rewards=(
            active, RewardVector.from_alpha(np.zeros(3))), dims=(1, 1))
        assert eval_composed(r, basis, [0.4, 0.9]) == pytest.approx(
            active.eval(basis, 0.4))

    def test_additivity(self, basis):
        r1 = RewardVector.from_alpha(np.array([0.5, -1.0]))
        r2 = RewardVector.from_alpha(np.array([0.1, 0.7]))
        both = ComposedReward(component_rewards=(r1, r2), dims=(1, 1))
        s = [0.25, -0.6]
        assert eval_composed(both, basis, s) == pytest.approx(
            r1.eval(basis, s[0]) + r2.eval(basis, s[1]))

    def test_dimension_mismatch(self, basis):
        r = ComposedReward(component_rewards=(
            RewardVector.from_alpha(np.zeros(2)),), dims=(1,))
        with pytest.raises(ValueError):
            eval_composed(r, basis, [0.1, 0.2])


def composed_rollout_returns(dec, composed, basis, s0_vec, horizon, rollouts,
                             rng):
    """Monte Carlo oracle for the joint process: coordinates evolve
    independently under the shared action, rewards add across components."""
    gamma = dec.components[0].gamma
    nacts = dec.components[0].num_actions
    means = np.empty(nacts)
    ses = np.empty(nacts)
    for a in range(nacts):
        states = [np.full(rollouts, float(s0_vec[j]))
                  for j in range(len(dec.components))]
        total = np.zeros(rollouts)
        for r in range(1, horizon + 1):
            act = a if r == 1 else 0
            step = np.zeros(rollouts)
            for j, comp in enumerate(dec.components):
                states[j] = comp.transitions[act].sample(states[j], rng)
                step += composed.component_rewards[j].eval(basis, states[j])
            total += gamma**r * step
        means[a] = total.mean()
        ses[a] = total.std(ddof=1) / np.sqrt(rollouts)
    return means, ses


def test_two_dimensional_rollout_ranking(basis):
    # product-form instance: the composed reward must make the optimal
    # action win the rollout comparison at almost every start state
    dec = _decomposed([23, 31])
    composed = solve_decomposed(dec, basis, 0.05, None, 11, exact=True)
    start_rng = np.random.default_rng(2331)
    starts = 2.0 * start_rng.random((40, 2)) - 1.0
    wins = 0
    for si in range(starts.shape[0]):
        rng = np.random.default_rng(7000 + si)
        means, ses = composed_rollout_returns(dec, composed, basis, starts[si],
                                              horizon=6, rollouts=1500, rng=rng)
        ok = all(means[0] > means[a]
                 and (means[0] - means[a]) >= 2.0 * np.hypot(ses[0], ses[a])
                 for a in range(1, 3))
        wins += ok
    assert wins >= int(0.95 * starts.shape[0])
