"""Tests for optimal-profile minimization and recovery sequences."""

import numpy as np
import pytest

from hophase import (
    EnergyParams,
    Field,
    Grid,
    JumpFunction,
    MinimizeOptions,
    ProfileProblem,
    build_recovery,
    estimate_constants,
    evaluate,
    minimize_profile,
)
from hophase.profiles import default_starts


class TestProfileMinimization:
    def test_order_one_matches_classical_constant(self, quartic):
        # n = 1, lam = 0 is the classical sharp-interface problem whose
        # minimum is 2 int_{-1}^{1} sqrt(W) = 2 int (1-t^2) dt = 8/3
        res = minimize_profile(ProfileProblem(1, 0.0, 8.0, 1601, quartic))
        assert res.converged
        assert res.energy_estimate == pytest.approx(8.0 / 3.0, rel=1e-6)

    def test_order_two_constant_stable_under_truncation_doubling(
        self, quartic, profile_constant_2
    ):
        res5 = minimize_profile(ProfileProblem(2, 0.0, 5.0, 1001, quartic))
        assert 2.05 < profile_constant_2 < 2.15
        assert res5.energy_estimate == pytest.approx(
            profile_constant_2, rel=5e-3
        )

    def test_tails_are_clamped_to_wells(self, quartic):
        prob = ProfileProblem(2, 0.0, 5.0, 801, quartic)
        res = minimize_profile(prob)
        band = prob.clamp_band
        assert np.all(res.minimizer.values[:band] == -1.0)
        assert np.all(res.minimizer.values[-band:] == 1.0)

    def test_descent_from_every_default_start(self, quartic):
        prob = ProfileProblem(2, 0.0, 5.0, 801, quartic)
        energy_of = lambda vals: evaluate(
            Field(prob.grid, vals), EnergyParams(2, 1.0, 0.0), quartic
        ).total
        res = minimize_profile(prob)
        for _, u0 in default_starts(prob):
            u0 = u0.copy()
            u0[: prob.clamp_band] = -1.0
            u0[-prob.clamp_band :] = 1.0
            assert res.energy_estimate <= energy_of(u0) + 1e-12

    def test_custom_init_descends(self, quartic):
        prob = ProfileProblem(2, 0.0, 4.0, 601, quartic)
        init = np.sign(prob.grid.nodes())
        res = minimize_profile(prob, init=init)
        assert res.energy_estimate < 2.2
        with pytest.raises(ValueError):
            minimize_profile(prob, init=np.zeros(17))

    def test_problem_validation(self, quartic):
        with pytest.raises(ValueError):
            ProfileProblem(0, 0.0, 5.0, 801, quartic)
        with pytest.raises(ValueError):
            ProfileProblem(2, 0.0, -1.0, 801, quartic)
        with pytest.raises(ValueError):
            ProfileProblem(2, 0.0, 5.0, 200, quartic)


class TestConstantsEstimate:
    def test_sandwich_mid_subcritical(self, quartic, lambda_hat_2):
        lam = 0.3 * lambda_hat_2.value
        est = estimate_constants(
            2,
            lam,
            quartic,
            truncation_T=6.0,
            num_points=1201,
            lambda_hat=lambda_hat_2.value,
        )
        assert est.sandwich_ok
        assert est.c_hat_lam <= est.c_hat_0
        assert est.c_hat_lam >= (1 - lam / lambda_hat_2.value) * est.c_hat_0 * 0.98
        c0, c1 = est  # tuple-unpacking view
        assert (c0, c1) == (est.c_hat_0, est.c_hat_lam)

    def test_supercritical_lam_rejected(self, quartic):
        with pytest.raises(ValueError, match="not subcritical"):
            estimate_constants(2, 0.2, quartic, lambda_hat=0.057)

    def test_lam_zero_shortcut(self, quartic):
        est = estimate_constants(
            2, 0.0, quartic, truncation_T=5.0, num_points=801
        )
        assert est.c_hat_0 == est.c_hat_lam
        assert est.result_0 is est.result_lam

    def test_negative_lam_rejected(self, quartic):
        with pytest.raises(ValueError):
            estimate_constants(2, -0.01, quartic)


class TestJumpFunction:
    def test_evaluate_alternates_between_wells(self):
        u = JumpFunction(-4.0, 4.0, (-4.0 / 3.0, 4.0 / 3.0))
        x = np.array([-3.0, 0.0, 3.0])
        np.testing.assert_array_equal(u.evaluate(x), [-1.0, 1.0, -1.0])
        flipped = JumpFunction(-4.0, 4.0, (0.0,), left_value=1.0)
        np.testing.assert_array_equal(
            flipped.evaluate(np.array([-1.0, 1.0])), [1.0, -1.0]
        )

    def test_delta0_pads_with_endpoints(self):
        assert JumpFunction(-4.0, 4.0, (0.0,)).delta0 == 4.0
        assert JumpFunction(-4.0, 4.0, (-4 / 3, 4 / 3)).delta0 == pytest.approx(
            8.0 / 3.0
        )
        assert JumpFunction(0.0, 10.0, (1.0, 5.0)).delta0 == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            JumpFunction(0.0, 1.0, (1.5,))
        with pytest.raises(ValueError):
            JumpFunction(0.0, 1.0, (0.7, 0.3))
        with pytest.raises(ValueError):
            JumpFunction(0.0, 1.0, (0.5,), left_value=0.0)
        with pytest.raises(ValueError):
            JumpFunction(1.0, 0.0, ())


@pytest.fixture(scope="module")
def profile5(quartic):
    return minimize_profile(ProfileProblem(2, 0.0, 5.0, 1001, quartic))


class TestRecovery:
    def test_matches_jump_function_away_from_layers(self, profile5):
        u = JumpFunction(-4.0, 4.0, (0.0,))
        rec = build_recovery(u, profile5.minimizer, eps=0.25)
        x = rec.grid.nodes()
        outside = np.abs(x) > 0.25 * 5.0
        np.testing.assert_array_equal(rec.values[outside], u.evaluate(x[outside]))

    def test_l1_distance_bounded_by_window_size(self, profile5):
        # |rec - u| <= 2 on N windows of width 2 eps T each
        u = JumpFunction(-4.0, 4.0, (-4 / 3, 4 / 3))
        for eps in (0.25, 0.125):
            rec = build_recovery(u, profile5.minimizer, eps)
            diff = np.abs(rec.values - u.evaluate(rec.grid.nodes()))
            l1 = float(np.trapezoid(diff, rec.grid.nodes()))
            assert l1 <= 2 * u.jump_count * (2 * eps * 5.0)

    def test_energy_scales_with_jump_count(self, quartic, profile5):
        one = JumpFunction(-4.0, 4.0, (0.0,))
        two = JumpFunction(-4.0, 4.0, (-4 / 3, 4 / 3))
        p = EnergyParams(2, 0.125, 0.0)
        e1 = evaluate(build_recovery(one, profile5.minimizer, 0.125), p, quartic)
        e2 = evaluate(build_recovery(two, profile5.minimizer, 0.125), p, quartic)
        assert e2.total / e1.total == pytest.approx(2.0, rel=1e-4)

    def test_eps_too_large_rejected(self, profile5):
        u = JumpFunction(-1.0, 1.0, (0.0,))
        with pytest.raises(ValueError, match="delta0"):
            build_recovery(u, profile5.minimizer, eps=0.25)

    def test_asymmetric_profile_grid_rejected(self, quartic):
        u = JumpFunction(-4.0, 4.0, (0.0,))
        lopsided = Field.from_callable(Grid(-2.0, 3.0, 501), np.tanh)
        with pytest.raises(ValueError, match="symmetric"):
            build_recovery(u, lopsided, eps=0.1)

    def test_grid_resolution_tracks_eps(self, profile5):
        u = JumpFunction(-4.0, 4.0, (0.0,))
        rec = build_recovery(u, profile5.minimizer, 0.25, points_per_eps=32)
        assert rec.grid.num_points == round(8.0 / (0.25 / 32)) + 1
