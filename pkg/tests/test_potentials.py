"""Tests for double-well potentials and their assumption validation."""

import numpy as np
import pytest

from hophase import DoubleWell, get_potential, make_quartic, validate_assumptions
from hophase.potentials import estimate_coercivity


class TestQuartic:
    def test_wells_are_exact_roots(self, quartic):
        assert quartic.eval(np.array(1.0)) == 0.0
        assert quartic.eval(np.array(-1.0)) == 0.0
        assert quartic.eval(np.array(0.0)) == 1.0

    def test_derivative_closed_form(self, quartic):
        t = np.linspace(-2.5, 2.5, 31)
        np.testing.assert_allclose(quartic.eval_derivative(t), 4 * t**3 - 4 * t)
        np.testing.assert_allclose(
            quartic.eval_second_derivative(t), 12 * t**2 - 4
        )

    def test_even_symmetry(self, quartic):
        rng = np.random.default_rng(0)
        t = rng.uniform(-3, 3, 50)
        np.testing.assert_allclose(quartic.eval(t), quartic.eval(-t))

    def test_coercivity_constant_is_sharp(self, quartic):
        # W(t)/(t-1)^2 = (t+1)^2 has infimum 1 on t > 0, approached at 0+
        best = estimate_coercivity(quartic)
        assert best >= quartic.coercivity_L
        assert best < quartic.coercivity_L * 1.001

    def test_lookup_by_name(self):
        assert get_potential("quartic").name == "quartic"
        with pytest.raises(KeyError):
            get_potential("sextic")


class TestValidation:
    def test_quartic_passes_all(self, quartic):
        report = validate_assumptions(quartic)
        assert report.all_passed
        for name in ("nonnegativity", "wells", "coercivity", "derivative"):
            assert report[name].passed

    def test_unknown_result_name_raises(self, quartic):
        report = validate_assumptions(quartic)
        with pytest.raises(KeyError):
            report["smoothness"]

    def test_too_few_samples_rejected(self, quartic):
        with pytest.raises(ValueError):
            validate_assumptions(quartic, samples=10)

    def test_overstated_coercivity_fails(self):
        # same quartic but claiming L = 5: at t = 0, W = 1 < 5 * (0-1)^2
        w = DoubleWell(
            eval=make_quartic().eval,
            eval_derivative=make_quartic().eval_derivative,
            coercivity_L=5.0,
        )
        report = validate_assumptions(w)
        assert not report["coercivity"].passed
        assert report["coercivity"].worst_margin < 0
        assert abs(report["coercivity"].worst_point) < 0.75
        # the other assumptions are untouched
        assert report["nonnegativity"].passed
        assert report["wells"].passed

    def test_degenerate_wells_fail_coercivity(self):
        # |t^2-1|^3 vanishes to third order at the wells, so no quadratic
        # lower bound holds near them for any L > 0
        w = DoubleWell(
            eval=lambda t: np.abs(t**2 - 1.0) ** 3,
            eval_derivative=lambda t: 6.0 * t * (t**2 - 1.0) * np.abs(t**2 - 1.0),
            coercivity_L=1.0,
        )
        report = validate_assumptions(w)
        assert not report["coercivity"].passed
        assert abs(abs(report["coercivity"].worst_point) - 1.0) < 0.3
        assert report["nonnegativity"].passed

    def test_sign_changing_function_fails_nonnegativity(self):
        w = DoubleWell(
            eval=lambda t: t**2 - 1.0,
            eval_derivative=lambda t: 2.0 * t,
            coercivity_L=1.0,
        )
        report = validate_assumptions(w)
        assert not report["nonnegativity"].passed
        assert not report["wells"].passed
        assert report["derivative"].passed

    def test_wrong_derivative_is_caught(self):
        w = DoubleWell(
            eval=make_quartic().eval,
            eval_derivative=lambda t: 4.0 * t**3,  # missing the -4t term
            coercivity_L=1.0,
        )
        report = validate_assumptions(w)
        assert not report["derivative"].passed
