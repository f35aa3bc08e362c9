"""Tests for the interpolation quotient and the critical-constant search."""

import numpy as np
import pytest

from hophase import (
    Field,
    Grid,
    LambdaOptions,
    estimate_lambda_n,
    quotient,
    subdivided_quotient,
    verify_subcritical,
)
from hophase.ensembles import make_ensemble


class TestQuotient:
    def test_linear_field_unit_interval(self, quartic):
        # u = x on (0,1), n = 2: numerator = int (x^2-1)^2 = 8/15 (the
        # second-derivative part vanishes), denominator = int 1 = 1
        u = Field.from_callable(Grid(0.0, 1.0, 201), lambda x: x)
        r = quotient(u, 2, quartic)
        assert r.value == pytest.approx(8.0 / 15.0, rel=1e-8)
        assert r.numerator_parts[1] == pytest.approx(0.0, abs=1e-18)
        assert r.denominator == pytest.approx(1.0, rel=1e-12)

    def test_linear_field_length_two(self, quartic):
        # u = x on (0,2): int_0^2 (x^2-1)^2 = 46/15; with the length
        # weights |I|^(-2) and |I|^2 the quotient is (46/60)/2 = 23/60.
        # Simpson integrates the quartic to near machine accuracy, while
        # trapezoid carries its h^2 boundary term here.
        u = Field.from_callable(Grid(0.0, 2.0, 201), lambda x: x)
        assert quotient(u, 2, quartic, rule="simpson").value == pytest.approx(
            23.0 / 60.0, rel=1e-8
        )
        assert quotient(u, 2, quartic).value == pytest.approx(
            23.0 / 60.0, rel=1e-3
        )

    def test_constant_fields_rejected(self, quartic):
        g = Grid(0.0, 1.0, 101)
        for c in (1.0, -1.0, 0.3):
            with pytest.raises(ValueError, match="quotient undefined"):
                quotient(Field(g, np.full(101, c)), 2, quartic)

    def test_scale_invariance(self, quartic):
        # carrying the same samples onto a stretched grid multiplies both
        # the weighted numerator and the denominator by sigma^(3-2n)
        g = Grid(0.0, 1.0, 181)
        for n in (2, 3):
            for u in make_ensemble(g, 6, seed=40 + n):
                base = quotient(u, n, quartic).value
                for sigma in (0.5, 2.0, 5.0):
                    v = Field(Grid(0.0, sigma, 181), u.values)
                    assert quotient(v, n, quartic).value == pytest.approx(
                        base, rel=1e-10
                    )

    def test_numerator_is_sum_of_squares(self, quartic):
        g = Grid(0.0, 1.3, 161)
        for u in make_ensemble(g, 12, seed=17):
            r = quotient(u, 2, quartic)
            assert r.numerator_parts[0] >= 0.0
            assert r.numerator_parts[1] >= 0.0
            assert r.denominator > 0.0

    def test_subdivided_matches_quotient_on_unit_interval(self, quartic):
        g = Grid(0.0, 1.0, 161)
        for u in make_ensemble(g, 5, seed=3):
            assert subdivided_quotient(u, 2, quartic) == pytest.approx(
                quotient(u, 2, quartic).value, rel=1e-12
            )


class TestLambdaEstimate:
    def test_value_in_frozen_band(self, lambda_hat_2):
        # two independent search routes (polynomial-coefficient descent
        # with Gauss-Legendre integrals, grid descent with FD stencils)
        # agree on this band to well under its width
        assert 0.0560 < lambda_hat_2.value < 0.0580

    def test_witness_attains_the_value(self, quartic, lambda_hat_2):
        r = quotient(lambda_hat_2.witness, 2, quartic)
        assert r.value == pytest.approx(lambda_hat_2.value, rel=1e-9)

    def test_grid_refinement_stability(self, quartic, lambda_hat_2):
        opts = LambdaOptions(num_points=301, n_random_starts=4, poly_starts=4)
        coarse = estimate_lambda_n(2, quartic, opts)
        assert abs(coarse.value - lambda_hat_2.value) < 1e-3

    def test_diagnostics_and_per_start(self, lambda_hat_2):
        assert lambda_hat_2.n == 2
        assert lambda_hat_2.diagnostics["num_points"] == 501
        assert min(lambda_hat_2.per_start) >= lambda_hat_2.value - 1e-12

    def test_higher_order_constant_is_much_smaller(self, quartic):
        opts = LambdaOptions(num_points=301, n_random_starts=2, poly_starts=4)
        est3 = estimate_lambda_n(3, quartic, opts)
        assert est3.value < 2e-3


class TestVerifySubcritical:
    def test_half_critical_is_clean(self, quartic, lambda_hat_2):
        lam = 0.5 * lambda_hat_2.value
        rep = verify_subcritical(2, lam, 300, quartic, seed=0)
        assert rep.passed
        assert rep.num_checked == 300
        assert rep.violations == []
        assert rep.min_quotient > lam

    def test_supercritical_witness_violates(self, quartic, lambda_hat_2):
        lam = 2.0 * lambda_hat_2.value
        rep = verify_subcritical(
            2, lam, 50, quartic, seed=0, extra_fields=(lambda_hat_2.witness,)
        )
        assert not rep.passed
        assert len(rep.violations) >= 1
        worst = min(v["quotient"] for v in rep.violations)
        assert worst == pytest.approx(lambda_hat_2.value, rel=1e-6)

    def test_order_three_band(self, quartic):
        rep = verify_subcritical(3, 4e-4, 100, quartic, seed=1)
        assert rep.passed
