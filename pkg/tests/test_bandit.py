import math

import numpy as np
import pytest

from sfbandit import oracles
from sfbandit.bandit import (
    BanditState,
    Exp3State,
    Exploration,
    ScaleViolationError,
    exp3_round,
    iw_estimate,
    play_round,
    sample_arm,
    sampling_distribution,
    update_gamma,
)
from sfbandit.ftrl import adaftrl_step

# arms are 0-indexed: "arm 1 of 2" in hand calculations is index 0 here


def test_sampling_distribution_examples():
    p = np.array([0.9, 0.1])
    np.testing.assert_array_equal(sampling_distribution(p, 0.0), p)
    np.testing.assert_allclose(sampling_distribution(np.full(4, 0.25), 0.3), 0.25)
    np.testing.assert_allclose(sampling_distribution(p, 0.5), [0.7, 0.3], rtol=1e-15)
    with pytest.raises(ValueError):
        sampling_distribution(p, 0.6)


def test_iw_examples():
    np.testing.assert_array_equal(iw_estimate(0, 2.0, [0.5, 0.5]).vector(), [4.0, 0.0])
    np.testing.assert_array_equal(iw_estimate(1, 0.0, [0.5, 0.5]).vector(), [0.0, 0.0])
    np.testing.assert_allclose(iw_estimate(1, -3.0, [0.25, 0.75]).vector(), [0.0, -4.0], rtol=1e-15)


def test_iw_unbiased_by_enumeration(rng):
    for _ in range(200):
        n = int(rng.integers(1, 9))
        pprime = rng.dirichlet(np.ones(n))
        loss = rng.standard_normal(n) * 10 ** rng.uniform(-3, 3)
        expected = sum(pprime[i] * iw_estimate(i, loss[i], pprime).vector() for i in range(n))
        np.testing.assert_allclose(expected, loss, rtol=1e-12, atol=1e-12 * np.abs(loss).max())
        np.testing.assert_allclose(oracles.iw_expectation(pprime, loss), loss, rtol=1e-12,
                                   atol=1e-12 * np.abs(loss).max())


def test_gamma_non_adaptive_schedule():
    s = BanditState.start(4, "non-adaptive", seed=0)
    s = type(s)(s.ftrl, s.gamma, s.gamma_sum, s.option, 63, s.rng)
    gamma, _ = update_gamma(s, iw_estimate(0, 1.0, np.full(4, 0.25)))
    assert gamma == pytest.approx(0.25, rel=1e-15)


def test_gamma_adaptive_first_round():
    s = BanditState.start(2, Exploration.ADAPTIVE, seed=0)
    gamma, total = update_gamma(s, iw_estimate(0, 1.0, [0.5, 0.5]))
    assert total == pytest.approx(1.0, rel=1e-15)
    assert gamma == pytest.approx(0.4, rel=1e-15)


def test_gamma_adaptive_zero_losses_stays_half():
    s = BanditState.start(3, "adaptive", seed=1)
    for _ in range(50):
        s, rec = play_round(s, np.zeros(3))
        assert rec.gamma_next == 0.5


def test_zero_losses_keep_uniform():
    for option in Exploration:
        s = BanditState.start(5, option, seed=2)
        for t in range(1, 30):
            s, rec = play_round(s, np.zeros(5))
            np.testing.assert_allclose(s.p, 0.2)
            assert s.eta == 5.0 and rec.loss == 0.0
            if option is Exploration.NON_ADAPTIVE:
                assert rec.gamma_next == min(0.5, math.sqrt(5 / t))


def _seed_picking_first_arm():
    for seed in range(100):
        if np.random.default_rng(seed).random() < 0.5:
            return seed
    raise AssertionError("no seed found")


def test_round_is_composition_of_components():
    seed = _seed_picking_first_arm()
    state = BanditState.start(2, "adaptive", seed=seed)
    new, rec = play_round(state, [1.0, 0.0])

    rng = np.random.default_rng(seed)
    pprime = sampling_distribution(np.full(2, 0.5), 0.5)
    arm = sample_arm(rng, pprime)
    assert arm == 0 == rec.arm
    est = iw_estimate(arm, 1.0, pprime)
    gamma, _ = update_gamma(BanditState.start(2, "adaptive", seed=seed), est)
    ftrl = adaftrl_step(BanditState.start(2, "adaptive").ftrl, est.vector())

    np.testing.assert_array_equal(rec.pprime, pprime)
    np.testing.assert_array_equal(rec.estimate, [2.0, 0.0])
    assert rec.loss == 1.0
    assert rec.gamma == 0.5 and rec.gamma_next == gamma == new.gamma
    assert rec.eta == 2.0 and rec.eta_next == ftrl.eta == new.eta
    np.testing.assert_array_equal(new.p, ftrl.current)


def test_determinism(rng):
    losses = rng.standard_normal((200, 6))
    runs = []
    for _ in range(2):
        s = BanditState.start(6, "adaptive", seed=123)
        trace = []
        for row in losses:
            s, rec = play_round(s, row)
            trace.append((rec.arm, rec.eta_next, rec.gamma_next))
        runs.append(trace)
    assert runs[0] == runs[1]


def test_trajectory_invariants(rng):
    losses = rng.standard_normal((300, 5)) * 50
    for option in Exploration:
        s = BanditState.start(5, option, seed=9)
        for row in losses:
            s, rec = play_round(s, row)
            assert np.all(rec.pprime >= rec.gamma / 5 - 1e-15)
            assert np.max(np.abs(rec.estimate)) <= 5 * abs(rec.loss) / rec.gamma * (1 + 1e-12)
            assert rec.eta_next <= rec.eta and rec.gamma_next <= rec.gamma
            assert 0.0 < rec.gamma_next <= 0.5


def test_exp3_zero_losses():
    s = Exp3State.start(3, 10, 1.0, seed=0)
    for _ in range(10):
        s, _ = exp3_round(s, np.zeros(3))
    np.testing.assert_allclose(s.p, 1 / 3)


def test_exp3_scale_violation():
    s = Exp3State.start(2, 10, 1.0, seed=0)
    with pytest.raises(ScaleViolationError):
        exp3_round(s, [2.0, 2.0])


def test_exp3_matches_hand_rolled_weights():
    s = Exp3State.start(2, 3, 1.0, seed=4)
    pulls = []
    for _ in range(3):
        s, rec = exp3_round(s, [1.0, 0.0])
        pulls.append((rec.arm, rec.loss))
    np.testing.assert_allclose(s.p, oracles.exp_weights_oracle(2, s.eta, pulls), rtol=1e-12)
