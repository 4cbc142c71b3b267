import math

import numpy as np
import pytest

from spprox import (ConstantStepsize, PolynomialDecay, QuadraticNorm,
                    RandomSource, StochasticProblem, WholeSpace, phi, theta,
                    theta0)


def test_stepsize_examples():
    assert PolynomialDecay(1.0, 1.0).at(4) == 0.25
    assert PolynomialDecay(1.0, 0.5).at(4) == 0.5
    assert PolynomialDecay(0.7, 1.3).at(0) == 0.7
    assert ConstantStepsize(0.3).at(10) == 0.3


def test_stepsize_nonincreasing():
    for sched in (ConstantStepsize(0.5), PolynomialDecay(1.0, 0.5),
                  PolynomialDecay(2.0, 1.5)):
        vals = [sched.at(k) for k in range(200)]
        assert all(a >= b > 0 for a, b in zip(vals, vals[1:]))


def test_partial_sums_match_loop():
    for sched in (ConstantStepsize(0.4), PolynomialDecay(1.5, 0.7)):
        for k in (1, 5, 33):
            s1, s2 = sched.partial_sums(k)
            l1 = sum(sched.at(i) for i in range(k))
            l2 = sum(sched.at(i) ** 2 for i in range(k))
            assert abs(s1 - l1) <= 1e-12 * (1 + l1)
            assert abs(s2 - l2) <= 1e-12 * (1 + l2)


def test_block_matches_at():
    sched = PolynomialDecay(1.0, 0.5)
    block = sched.block(0, 10)
    assert np.allclose(block, [sched.at(k) for k in range(10)])


def test_phi_examples():
    assert phi(1.0, 3.0) == 2.0
    assert abs(phi(0.0, math.e) - 1.0) < 1e-15
    assert abs(phi(0.5, 4.0) - 2.0) < 1e-14


def test_phi_rejects_nonpositive():
    with pytest.raises(ValueError):
        phi(1.0, 0.0)
    with pytest.raises(ValueError):
        phi(0.0, -2.0)


def test_phi_increasing_and_continuous_in_alpha():
    for alpha in (-1.0, -0.3, 0.0, 0.4, 1.0, 2.0):
        xs = [0.2, 0.7, 1.0, 2.5, 9.0]
        vals = [phi(alpha, x) for x in xs]
        assert all(a < b for a, b in zip(vals, vals[1:]))
    for x in (0.3, 1.7, 12.0):
        for eps in (1e-8, -1e-8):
            assert abs(phi(eps, x) - phi(0.0, x)) < 1e-6


def test_theta_examples():
    assert theta(1.0, 1.0) == 0.5
    assert theta(2.7, 0.0) == 1.0
    vals = [theta(mu, 1.0) for mu in (0.1, 1.0, 10.0, 100.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.02


def _problem_with_sigmas(sigmas):
    losses = [QuadraticNorm(2, s) for s in sigmas]
    return StochasticProblem(losses, [WholeSpace(2)], 2)


def test_theta0_examples():
    assert theta0(_problem_with_sigmas([1.0]), 1.0) == 0.25
    assert abs(theta0(_problem_with_sigmas([0.0, 1.0]), 1.0) - 0.625) < 1e-15


def test_theta0_requires_some_strong_convexity():
    with pytest.raises(ValueError):
        theta0(_problem_with_sigmas([0.0, 0.0]), 1.0)


def test_theta0_below_one_with_positive_sigma():
    p = _problem_with_sigmas([0.0, 0.0, 0.5])
    assert 0.0 < theta0(p, 0.3) < 1.0


def test_theta0_matches_sampling_oracle(small_ls):
    mu0 = 1.0
    exact = theta0(small_ls, mu0)
    assert 0.0 < exact < 1.0
    rng = RandomSource(77)
    li, _ = small_ls.sample_indices(rng, 200_000)
    sigmas = small_ls.sigma_values()[li]
    mc = float(np.mean(1.0 / (1.0 + mu0 * sigmas) ** 2))
    assert abs(exact - mc) < 1e-3
