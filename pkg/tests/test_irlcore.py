"""Tests for operator construction, the covering set, and the margin LP."""

import math
import warnings

import numpy as np
import pytest
from scipy.optimize import linprog

from contirl import (
    CoeffMatrix,
    DivergenceError,
    IrlInfeasible,
    RewardVector,
    build_lp,
    classify_reward,
    compute_F,
    continuous_irl,
    covering_set,
    estimate_beta,
    eval_phi_deriv_matrix,
    eval_phi_matrix,
    eval_phi_vector,
    exact_Z,
    gen_problem,
    inf_norm,
    load_reward,
    save_reward,
    solve_lp,
)


def _coeff(entries, provenance="exact", action_id=-1):
    e = np.asarray(entries, dtype=float)
    return CoeffMatrix(k=e.shape[0], entries=e, provenance=provenance,
                       action_id=action_id)


def _random_contraction(rng, k, norm):
    M = rng.normal(size=(k, k))
    return M * (norm / inf_norm(M))


class TestComputeF:
    def test_identical_dynamics_give_zero(self):
        rng = np.random.default_rng(0)
        T = _coeff(_random_contraction(rng, 5, 0.6))
        F = compute_F(T, T, 0.7)
        np.testing.assert_allclose(F.entries, np.zeros((5, 5)), atol=1e-12)

    def test_gamma_zero_is_plain_difference(self):
        rng = np.random.default_rng(1)
        T = _coeff(rng.normal(size=(4, 4)))
        Za = _coeff(rng.normal(size=(4, 4)))
        F = compute_F(T, Za, 0.0)
        np.testing.assert_array_equal(F.entries, T.entries - Za.entries)

    def test_solve_matches_series(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            k = int(rng.integers(3, 9))
            T = _coeff(_random_contraction(rng, k, 0.7 / (2 * 0.7)))
            Za = _coeff(_random_contraction(rng, k, 0.6))
            direct = compute_F(T, Za, 0.7, method="solve")
            series = compute_F(T, Za, 0.7, method="series")
            assert np.max(np.abs(direct.entries - series.entries)) <= 1e-10

    def test_spectral_divergence_rejected(self):
        T = _coeff(1.6 * np.eye(3))
        Za = _coeff(np.zeros((3, 3)))
        with pytest.raises(DivergenceError):
            compute_F(T, Za, 0.7)

    def test_strict_norm_check_is_optional(self):
        # max-row-sum above 1/gamma but spectral radius below it: the
        # resolvent exists, only the conservative sufficient condition fails
        T = _coeff(np.array([[0.5, 1.2], [0.0, 0.5]]))
        Za = _coeff(np.zeros((2, 2)))
        assert T.inf_norm() > 1.0 / 0.7
        F = compute_F(T, Za, 0.7)
        assert np.all(np.isfinite(F.entries))
        with pytest.raises(DivergenceError):
            compute_F(T, Za, 0.7, strict_norm_check=True)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compute_F(_coeff(np.eye(3) * 0.1), _coeff(np.eye(4) * 0.1), 0.5)


class TestCoveringSet:
    def test_reference_width(self):
        assert covering_set(0.05).points.size == 40

    def test_single_point(self):
        cover = covering_set(2.0)
        np.testing.assert_allclose(cover.points, [0.0])

    def test_every_state_is_covered(self):
        for c in (0.05, 0.11, 0.37, 1.0, 2.0):
            points = covering_set(c).points
            grid = np.linspace(-1.0, 1.0, 10_000)
            dists = np.min(np.abs(grid[:, None] - points[None, :]), axis=1)
            assert np.max(dists) <= c

    def test_count_formula(self):
        for c in (0.03, 0.09, 0.5, 1.7):
            assert covering_set(c).points.size == math.ceil(2.0 / c)

    def test_domain_and_clamp(self):
        with pytest.raises(ValueError):
            covering_set(0.0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            cover = covering_set(5.0)
        assert caught and cover.points.size == 1


class TestBuildLp:
    def test_shape_for_reference_parameters(self, basis):
        rng = np.random.default_rng(3)
        Fs = [compute_F(_coeff(_random_contraction(rng, 5, 0.5)),
                        _coeff(_random_contraction(rng, 5, 0.5), action_id=a), 0.7)
              for a in (1, 2)]
        lp = build_lp(Fs, covering_set(0.05), basis)
        assert lp.constraint_matrix.shape == (80, 10)
        assert lp.num_vars == 10
        assert np.all(lp.rhs == 1.0) and lp.sense == ">="

    def test_rows_encode_the_margin(self, basis):
        rng = np.random.default_rng(4)
        F = compute_F(_coeff(_random_contraction(rng, 4, 0.5)),
                      _coeff(_random_contraction(rng, 4, 0.5), action_id=1), 0.7)
        cover = covering_set(0.5)
        lp = build_lp([F], cover, basis)
        u = np.abs(rng.normal(size=4))
        v = np.abs(rng.normal(size=4))
        alpha = u - v
        for r, s_bar in enumerate(cover.points):
            margin = alpha @ F.entries @ eval_phi_vector(basis, 4, s_bar)
            row_value = lp.constraint_matrix[r] @ np.concatenate([u, v])
            assert row_value == pytest.approx(margin, abs=1e-12)

    def test_single_variable_case(self, basis):
        F = compute_F(_coeff(np.array([[0.3]])), _coeff(np.array([[0.1]])), 0.0)
        lp = build_lp([F], covering_set(1.0), basis)
        assert lp.constraint_matrix.shape == (2, 2)

    def test_empty_list_rejected(self, basis):
        with pytest.raises(ValueError):
            build_lp([], covering_set(0.5), basis)


class TestSolveLp:
    def test_scalar_margin(self, basis):
        # margin gradient 2 at the single covering point: alpha = 1/2
        F = compute_F(_coeff(np.array([[2.0 / eval_phi_vector(basis, 1, 0.0)[0]]])),
                      _coeff(np.zeros((1, 1))), 0.0)
        lp = build_lp([F], covering_set(2.0), basis)
        reward = solve_lp(lp)
        assert reward.alpha[0] == pytest.approx(0.5)
        assert reward.l1_norm == pytest.approx(0.5)

    def test_matches_independent_reference(self, basis):
        rng = np.random.default_rng(5)
        checked = 0
        for _ in range(20):
            k = int(rng.integers(2, 7))
            Fs = [compute_F(_coeff(_random_contraction(rng, k, 0.5)),
                            _coeff(_random_contraction(rng, k, 0.5), action_id=1),
                            0.7)]
            lp = build_lp(Fs, covering_set(0.2), basis)
            ref = linprog(lp.objective, A_ub=-lp.constraint_matrix,
                          b_ub=-lp.rhs, bounds=[(0, None)] * lp.num_vars,
                          method="highs")
            try:
                reward = solve_lp(lp)
            except IrlInfeasible:
                assert ref.status == 2
                continue
            assert ref.status == 0
            assert reward.l1_norm == pytest.approx(ref.fun, abs=1e-8)
            checked += 1
        assert checked >= 10

    def test_scaling_inverts_solution(self, basis):
        rng = np.random.default_rng(6)
        F = compute_F(_coeff(_random_contraction(rng, 4, 0.5)),
                      _coeff(_random_contraction(rng, 4, 0.5), action_id=1), 0.7)
        lp = build_lp([F], covering_set(0.25), basis)
        scaled = build_lp([type(F)(k=F.k, entries=3.0 * F.entries,
                                   action_id=1, gamma=F.gamma)],
                          covering_set(0.25), basis)
        try:
            a = solve_lp(lp)
            b = solve_lp(scaled)
        except IrlInfeasible:
            pytest.skip("random instance infeasible")
        np.testing.assert_allclose(3.0 * b.alpha, a.alpha, atol=1e-8)

    def test_infeasible_raises(self, basis):
        F = compute_F(_coeff(np.zeros((3, 3))), _coeff(np.zeros((3, 3))), 0.0)
        with pytest.raises(IrlInfeasible):
            solve_lp(build_lp([F], covering_set(0.5), basis))


class TestContinuousIrl:
    def test_seeded_determinism(self, basis):
        problem = gen_problem(3, 0.7, 4, 23)
        a = continuous_irl(problem, basis, 0.05, 2000, 5,
                           rng=np.random.default_rng(9))
        b = continuous_irl(problem, basis, 0.05, 2000, 5,
                           rng=np.random.default_rng(9))
        np.testing.assert_array_equal(a.alpha, b.alpha)

    def test_exact_mode_recovers_correct_reward(self, basis):
        problem = gen_problem(3, 0.7, 4, 23)
        alpha = continuous_irl(problem, basis, 0.05, None, 11, exact=True)
        Zs = [exact_Z(t, basis, 11, action_id=a)
              for a, t in enumerate(problem.transitions)]
        Fs = [compute_F(Zs[0], Za, problem.gamma) for Za in Zs[1:]]
        assert classify_reward(alpha, Fs, basis).correct

    def test_sampled_mode_requires_rng(self, basis):
        problem = gen_problem(3, 0.7, 4, 23)
        with pytest.raises(ValueError):
            continuous_irl(problem, basis, 0.05, 100, 5)

    def test_myopic_hand_instance(self, basis, myopic_problem):
        # brute-force oracle: some coefficient vector on a coarse grid has a
        # strictly positive margin, so the LP must find a feasible reward
        Zs = [exact_Z(t, basis, 3, action_id=a)
              for a, t in enumerate(myopic_problem.transitions)]
        F = compute_F(Zs[0], Zs[1], 0.0)
        grid = np.linspace(-1.0, 1.0, 2001)
        phi = eval_phi_matrix(basis, 3, grid)
        best = max(
            float(np.min(phi @ (F.entries.T @ np.array([a1, a2, a3]))))
            for a1 in np.linspace(-1, 1, 9)
            for a2 in np.linspace(-1, 1, 9)
            for a3 in np.linspace(-1, 1, 9)
        )
        assert best > 0.0
        reward = continuous_irl(myopic_problem, basis, 0.05, None, 3, exact=True)
        margin = float(np.min(phi @ (F.entries.T @ reward.alpha)))
        assert margin > 0.0


class TestEstimateBeta:
    def test_reciprocal_l1_identity(self, basis):
        problem = gen_problem(3, 0.7, 4, 23)
        beta = estimate_beta(problem, basis)
        alpha = continuous_irl(problem, basis, 0.05, None, 11, exact=True)
        assert beta == pytest.approx(1.0 / alpha.l1_norm, rel=1e-12)

    def test_linf_variant(self, basis):
        problem = gen_problem(3, 0.7, 4, 23)
        beta_inf = estimate_beta(problem, basis, norm="linf")
        alpha = continuous_irl(problem, basis, 0.05, None, 11, exact=True)
        assert beta_inf == pytest.approx(1.0 / np.max(np.abs(alpha.alpha)),
                                         rel=1e-12)
        assert beta_inf >= estimate_beta(problem, basis)

    def test_l1_bound_from_separation(self, basis):
        # with exact operators the solution's l1 norm cannot exceed the
        # reciprocal separation
        for seed in (0, 7, 23):
            problem = gen_problem(3, 0.7, 4, seed)
            beta = estimate_beta(problem, basis)
            alpha = continuous_irl(problem, basis, 0.05, None, 11, exact=True)
            assert alpha.l1_norm <= (1.0 / beta) * (1.0 + 1e-6)

    def test_unknown_norm(self, basis):
        problem = gen_problem(3, 0.7, 4, 23)
        with pytest.raises(ValueError):
            estimate_beta(problem, basis, norm="l2")


class TestLipschitzExtension:
    def test_positive_margin_everywhere_with_small_cover(self, basis,
                                                         engineered_problem):
        # measured Lipschitz constant of the margin gradient; choosing the
        # covering step under separation/rho makes grid positivity extend
        # to a 10k-point grid of the whole interval
        k = 11
        Zs = [exact_Z(t, basis, k, action_id=a)
              for a, t in enumerate(engineered_problem.transitions)]
        Fs = [compute_F(Zs[0], Za, engineered_problem.gamma) for Za in Zs[1:]]
        grid = np.linspace(-1.0, 1.0, 10_001)
        dphi = eval_phi_deriv_matrix(basis, k, grid)
        rho_hat = max(float(np.max(np.abs(dphi @ F.entries.T))) for F in Fs)
        beta_hat = estimate_beta(engineered_problem, basis, k=k, c=0.05)
        assert beta_hat > 0.05 * rho_hat  # cover step 0.05 is small enough
        alpha = continuous_irl(engineered_problem, basis, 0.05, None, k,
                               exact=True)
        phi = eval_phi_matrix(basis, k, grid)
        min_margin = min(float(np.min(phi @ (F.entries.T @ alpha.alpha)))
                         for F in Fs)
        assert min_margin > 0.0


class TestRewardVector:
    def test_cached_norm_validated(self):
        with pytest.raises(ValueError):
            RewardVector(k=2, alpha=np.array([1.0, -2.0]), l1_norm=2.5)

    def test_serialization_round_trip(self, tmp_path):
        reward = RewardVector.from_alpha(np.array([0.25, -1.75, 3.0e-7]))
        path = tmp_path / "reward.txt"
        save_reward(reward, path)
        loaded = load_reward(path)
        np.testing.assert_array_equal(loaded.alpha, reward.alpha)
        save_reward(loaded, tmp_path / "again.txt")
        assert (tmp_path / "again.txt").read_bytes() == path.read_bytes()
