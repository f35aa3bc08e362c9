"""Tests for energy evaluation, rescaling, and the exact discrete gradient."""

import numpy as np
import pytest

from hophase import (
    EnergyParams,
    Field,
    Grid,
    evaluate,
    evaluate_rescaled,
    gradient,
    make_ensemble,
)


class TestEvaluate:
    def test_well_state_costs_nothing(self, quartic):
        g = Grid(0.0, 1.0, 101)
        u = Field(g, np.ones(101))
        b = evaluate(u, EnergyParams(2, 0.1), quartic)
        assert b.potential_term == 0.0
        # the stencil weights cancel exactly in rationals; after float
        # conversion a constant leaves ~1e-13 per row, squared by the form
        assert abs(b.highest_term) < 1e-20
        assert abs(b.total) < 1e-20

    def test_zero_state_integrates_potential_only(self, quartic):
        # u = 0 on (0,1): W(0) = 1, all derivatives vanish, E = 1/eps
        g = Grid(0.0, 1.0, 101)
        u = Field(g, np.zeros(101))
        b = evaluate(u, EnergyParams(2, 0.1, lam=3.0), quartic)
        assert b.total == pytest.approx(10.0, rel=1e-13)
        assert b.concave_term == 0.0

    def test_linear_field_closed_form(self, quartic):
        # u = x on (0,1), n = 2, eps = lam = 1: int W(x) = 8/15 (exact),
        # u' = 1 so the concave term is -1, u'' = 0; total = -7/15
        g = Grid(0.0, 1.0, 201)
        u = Field.from_callable(g, lambda x: x)
        b = evaluate(u, EnergyParams(2, 1.0, 1.0), quartic)
        assert b.potential_term == pytest.approx(8.0 / 15.0, rel=1e-8)
        assert b.concave_term == pytest.approx(-1.0, rel=1e-12)
        assert b.highest_term == pytest.approx(0.0, abs=1e-18)
        assert b.total == pytest.approx(-7.0 / 15.0, rel=1e-8)

    def test_breakdown_sums_to_total(self, quartic):
        g = Grid(-1.0, 2.0, 157)
        rng = np.random.default_rng(4)
        u = Field(g, np.tanh(rng.standard_normal(157).cumsum() / 10))
        b = evaluate(u, EnergyParams(3, 0.3, 0.01), quartic)
        assert b.total == b.potential_term + b.concave_term + b.highest_term

    def test_epsilon_scaling_of_each_term(self, quartic):
        # doubling eps scales the terms by exactly 1/2, 2^(2n-3), 2^(2n-1)
        g = Grid(0.0, 1.0, 129)
        u = Field.from_callable(g, lambda x: np.sin(2 * np.pi * x))
        for n in (2, 3):
            b1 = evaluate(u, EnergyParams(n, 0.25, 0.7), quartic)
            b2 = evaluate(u, EnergyParams(n, 0.5, 0.7), quartic)
            assert b2.potential_term == pytest.approx(
                b1.potential_term / 2, rel=1e-14
            )
            assert b2.concave_term == pytest.approx(
                b1.concave_term * 2 ** (2 * n - 3), rel=1e-14
            )
            assert b2.highest_term == pytest.approx(
                b1.highest_term * 2 ** (2 * n - 1), rel=1e-14
            )

    def test_lam_zero_energy_is_nonnegative(self, quartic):
        g = Grid(0.0, 2.0, 201)
        for u in make_ensemble(g, 20, seed=9):
            b = evaluate(u, EnergyParams(2, 0.2), quartic)
            assert b.total >= 0.0
            assert b.concave_term == 0.0

    def test_concave_term_sign(self, quartic):
        g = Grid(0.0, 2.0, 201)
        for u in make_ensemble(g, 10, seed=10):
            b = evaluate(u, EnergyParams(2, 0.2, lam=0.04), quartic)
            assert b.concave_term <= 0.0

    def test_params_validation(self):
        with pytest.raises(ValueError):
            EnergyParams(1, 0.1)
        with pytest.raises(ValueError):
            EnergyParams(2, 0.0)


class TestRescaled:
    def test_matches_direct_evaluation(self, quartic):
        # the rescaled functional on the stretched interval is the same
        # number computed on a different grid with different weights
        g = Grid(-2.0, 2.0, 513)
        u = Field.from_callable(g, lambda x: np.tanh(x / 0.25))
        p = EnergyParams(2, 0.25, 0.01)
        direct = evaluate(u, p, quartic).total
        rescaled = evaluate_rescaled(u, p, quartic)
        assert rescaled == pytest.approx(direct, rel=1e-4)

    def test_linear_field_agreement(self, quartic):
        g = Grid(0.0, 1.0, 401)
        u = Field.from_callable(g, lambda x: 2.0 * x - 1.0)
        p = EnergyParams(2, 0.5, 0.0)
        assert evaluate_rescaled(u, p, quartic) == pytest.approx(
            evaluate(u, p, quartic).total, rel=1e-6
        )

    def test_refine_validation(self, quartic):
        g = Grid(0.0, 1.0, 65)
        u = Field(g, np.zeros(65))
        with pytest.raises(ValueError):
            evaluate_rescaled(u, EnergyParams(2, 0.5), quartic, refine=0)


class TestGradient:
    def test_matches_directional_central_difference(self, quartic):
        rng = np.random.default_rng(21)
        g = Grid(0.0, 1.5, 161)
        t = 1e-6
        for n in (2, 3):
            p = EnergyParams(n, 0.3, 0.02)
            for u in make_ensemble(g, 10, seed=n):
                v = rng.standard_normal(161)
                v /= np.abs(v).max()
                gu = gradient(u, p, quartic).values
                e_plus = evaluate(Field(g, u.values + t * v), p, quartic).total
                e_minus = evaluate(Field(g, u.values - t * v), p, quartic).total
                fd = (e_plus - e_minus) / (2 * t)
                assert float(gu @ v) == pytest.approx(fd, rel=1e-6, abs=1e-10)

    def test_well_state_is_critical_point(self, quartic):
        g = Grid(0.0, 1.0, 101)
        u = Field(g, -np.ones(101))
        gu = gradient(u, EnergyParams(2, 0.1, 1.0), quartic).values
        assert np.abs(gu).max() < 1e-9
