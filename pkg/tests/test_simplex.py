import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sfbandit import oracles
from sfbandit.potential import EXPONENTIAL, LOG_BARRIER
from sfbandit.simplex import (
    CumulativeLoss,
    ftrl_iterate,
    ftrl_objective,
    mixability_gap,
    normalize_dual,
    solve_lambda,
    solve_mixability_gap,
    stability_bound,
)

GOLDEN = (-1.0 - math.sqrt(5.0)) / 2.0


@pytest.mark.parametrize("n", [1, 2, 7, 100])
def test_lambda_zero_theta_gives_uniform(n):
    assert solve_lambda(LOG_BARRIER, np.zeros(n)) == pytest.approx(-n, rel=1e-14)
    np.testing.assert_allclose(normalize_dual(LOG_BARRIER, np.zeros(n)), 1.0 / n, rtol=1e-14)


def test_lambda_golden_ratio_instance():
    assert solve_lambda(LOG_BARRIER, [0.0, -1.0]) == pytest.approx(GOLDEN, abs=1e-10)


def test_lambda_exponential_already_normalized():
    assert solve_lambda(EXPONENTIAL, [math.log(0.2), math.log(0.8)]) == pytest.approx(0.0, abs=1e-14)


def test_lambda_residual_random(rng):
    for pot in (LOG_BARRIER, EXPONENTIAL):
        for _ in range(300):
            theta = rng.uniform(-50, 50, rng.integers(1, 200))
            lam = solve_lambda(pot, theta)
            assert abs(np.sum(pot.psi(theta + lam)) - 1.0) <= 1e-12


def test_lambda_rejects_out_of_domain_theta():
    with pytest.raises(ValueError):
        solve_lambda(LOG_BARRIER, [0.0, np.inf])
    with pytest.raises(ValueError):
        solve_lambda(LOG_BARRIER, [])


def test_ftrl_iterate_examples():
    np.testing.assert_allclose(ftrl_iterate(LOG_BARRIER, 1.0, np.zeros(4)), 0.25)
    p = ftrl_iterate(LOG_BARRIER, 1.0, [0.0, 1.0])
    np.testing.assert_allclose(p, [0.6180339887, 0.3819660113], atol=1e-10)
    np.testing.assert_allclose(p, [-1 / GOLDEN, -1 / (GOLDEN - 1)], rtol=1e-13)
    for eta in (1e-3, 1.0, 1e3):
        np.testing.assert_allclose(ftrl_iterate(LOG_BARRIER, eta, np.full(5, 3.7)), 0.2, rtol=1e-12)


def test_ftrl_iterate_accepts_cumulative_loss_object():
    cl = CumulativeLoss(2).add([0.0, 0.5]).add([0.0, 0.5])
    np.testing.assert_allclose(ftrl_iterate(LOG_BARRIER, 1.0, cl), ftrl_iterate(LOG_BARRIER, 1.0, [0, 1]))


def test_cumulative_loss_compensated_sum():
    cl = CumulativeLoss(1)
    cl = cl.add([1e16])
    for _ in range(1000):
        cl = cl.add([1.0])
    cl = cl.add([-1e16])
    assert cl.sum[0] == 1000.0
    assert cl.t == 1002


@pytest.mark.parametrize("pot", [LOG_BARRIER, EXPONENTIAL])
def test_ftrl_iterate_matches_generic_optimizer(pot, rng):
    for _ in range(10):
        n = int(rng.integers(2, 6))
        total = rng.normal(0, 2, n)
        eta = float(10 ** rng.uniform(-1, 0.5))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ref = oracles.ftrl_argmin(pot, eta, total)
        p = ftrl_iterate(pot, eta, total)
        assert ftrl_objective(pot, eta, total, p) <= ftrl_objective(pot, eta, total, ref) + 1e-9
        np.testing.assert_allclose(p, ref, atol=1e-5)


@settings(max_examples=100, deadline=None)
@given(arrays(float, 4, elements=st.floats(-30, 30)), st.floats(-100, 100), st.floats(0.01, 10))
def test_ftrl_iterate_translation_invariant(total, c, eta):
    a = ftrl_iterate(LOG_BARRIER, eta, total)
    b = ftrl_iterate(LOG_BARRIER, eta, total + c)
    np.testing.assert_allclose(a, b, atol=1e-10)
    assert abs(a.sum() - 1.0) <= 1e-10 and np.all(a > 0)


def test_gap_examples():
    p = np.array([0.5, 0.5])
    assert mixability_gap(LOG_BARRIER, p, [0.0, 0.0], 1.0) == 0.0
    # frozen from the grid oracle (step 1e-3, three zoom refinements)
    assert mixability_gap(LOG_BARRIER, p, [1.0, 0.0], 0.1) == pytest.approx(0.0062480485, abs=1e-4)
    assert mixability_gap(LOG_BARRIER, p, [1.0, 0.0], 0.1) == pytest.approx(0.0062480485, abs=1e-9)
    for c in (-7.0, 0.0, 3.0, 1e6):
        assert mixability_gap(LOG_BARRIER, [0.1, 0.3, 0.6], np.full(3, c), 2.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("pot", [LOG_BARRIER, EXPONENTIAL])
def test_gap_agrees_with_grid_oracle(pot, rng):
    for k in range(30):
        n = 2 + k % 2
        p = rng.dirichlet(np.ones(n))
        eta = float(10 ** rng.uniform(-2, 0.5))
        if k % 3 == 0:
            loss = np.zeros(n)
            loss[rng.integers(n)] = -float(10 ** rng.uniform(-1, 1.5))
        else:
            loss = 2.0 * rng.standard_normal(n)
        m, q = solve_mixability_gap(pot, p, loss, eta)
        ref, _ = oracles.grid_mixability_gap(pot, p, loss, eta)
        assert m == pytest.approx(ref, abs=1e-4)
        assert m >= 0.0
        if pot is LOG_BARRIER:
            assert m <= stability_bound(p, loss, eta) + 1e-10
        assert abs(q.sum() - 1.0) <= 1e-10


def test_single_arm_is_degenerate():
    assert ftrl_iterate(LOG_BARRIER, 1.0, [5.0])[0] == 1.0
    assert mixability_gap(LOG_BARRIER, [1.0], [3.0], 1.0) == 0.0


def test_gap_rejects_bad_inputs():
    with pytest.raises(ValueError):
        mixability_gap(LOG_BARRIER, [0.5, 0.6], [1, 0], 1.0)
    with pytest.raises(ValueError):
        mixability_gap(LOG_BARRIER, [0.5, 0.5], [1, 0], 0.0)
    with pytest.raises(ValueError):
        mixability_gap(LOG_BARRIER, [0.5, 0.5], [np.nan, 0], 1.0)
