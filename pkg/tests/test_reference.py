"""Sanity checks that the oracles agree with each other where they overlap."""

import numpy as np

from .reference import (
    dense_frechet,
    diagonal_frechet,
    entropy_erank,
    random_psd,
    two_pass_cov,
)


def test_two_pass_matches_numpy_cov(rng):
    rows = rng.standard_normal((50, 7))
    mean, cov = two_pass_cov(rows)
    np.testing.assert_allclose(mean, rows.mean(axis=0), rtol=1e-12)
    np.testing.assert_allclose(cov, np.cov(rows, rowvar=False), rtol=1e-12)


def test_dense_frechet_agrees_with_diagonal_on_commuting_pairs(rng):
    for _ in range(20):
        d = int(rng.integers(1, 9))
        mu_x, mu_y = rng.standard_normal(d), rng.standard_normal(d)
        var_x, var_y = rng.uniform(0.1, 4.0, d), rng.uniform(0.1, 4.0, d)
        closed = diagonal_frechet(mu_x, var_x, mu_y, var_y)
        dense = dense_frechet(mu_x, np.diag(var_x), mu_y, np.diag(var_y))
        assert abs(dense - closed) <= 1e-9 * max(1.0, closed)


def test_dense_frechet_zero_on_identical_inputs(rng):
    cov = random_psd(rng, 5)
    mu = rng.standard_normal(5)
    assert abs(dense_frechet(mu, cov, mu, cov)) <= 1e-8 * max(1.0, np.trace(cov))


def test_entropy_erank_uniform_and_spike():
    assert abs(entropy_erank(np.eye(6)) - 6.0) <= 1e-12
    assert abs(entropy_erank(np.diag([3.0, 0.0, 0.0])) - 1.0) <= 1e-12
    assert abs(entropy_erank(np.diag([2.0, 1.0, 1.0])) - 2.0**1.5) <= 1e-12
