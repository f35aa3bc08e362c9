"""Shared fixtures; the expensive session-wide constants are computed once."""

import pytest

import hophase as hp


@pytest.fixture(scope="session")
def quartic():
    return hp.make_quartic()


@pytest.fixture(scope="session")
def lambda_hat_2(quartic):
    """Best upper bound found for the order-2 critical constant, with its
    witness field (shared by the sandwich, sweep, and ensemble tests)."""
    return hp.estimate_lambda_n(2, quartic)


@pytest.fixture(scope="session")
def profile_constant_2(quartic):
    """The lam = 0 optimal-profile constant for n = 2."""
    res = hp.minimize_profile(hp.ProfileProblem(2, 0.0, 10.0, 2001, quartic))
    assert res.converged
    return res.energy_estimate
