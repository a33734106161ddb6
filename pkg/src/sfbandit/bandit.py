"""Scale-free bandit: log-barrier AdaFTRL on importance-weighted estimates.

Each round mixes the FTRL iterate with the uniform distribution, samples an
arm, builds the one-hot importance-weighted estimate, updates the exploration
rate, and hands the estimate to AdaFTRL (``alpha = n``, ``beta = 1``).  An
Exp3 baseline with a known loss range ``G`` is included for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .ftrl import FtrlState, _adaftrl_step
from .potential import LOG_BARRIER


class Exploration(str, Enum):
    NON_ADAPTIVE = "non-adaptive"
    ADAPTIVE = "adaptive"


class ScaleViolationError(ValueError):
    """Observed loss magnitude exceeds the range a baseline was tuned for."""


class IwEstimate(NamedTuple):
    arm: int
    raw_loss: float
    prob: float
    n: int

    @property
    def value(self) -> float:
        return self.raw_loss / self.prob

    def vector(self) -> np.ndarray:
        v = np.zeros(self.n)
        v[self.arm] = self.value
        return v


class BanditRound(NamedTuple):
    t: int
    arm: int
    loss: float
    p: np.ndarray
    pprime: np.ndarray
    gamma: float        # gamma_{t-1}, used to sample this round
    eta: float          # eta_{t-1}, in force when the loss arrived
    gamma_next: float
    eta_next: float
    estimate: np.ndarray


@dataclass(frozen=True)
class BanditState:
    ftrl: FtrlState
    gamma: float
    gamma_sum: float
    option: Exploration
    t: int
    rng: np.random.Generator

    @classmethod
    def start(cls, n: int, option: Exploration | str = Exploration.NON_ADAPTIVE,
              seed: int | np.random.SeedSequence | np.random.Generator | None = None) -> "BanditState":
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return cls(FtrlState.start(n, alpha=n, beta=1.0, pot=LOG_BARRIER), 0.5, 0.0,
                   Exploration(option), 0, rng)

    @property
    def n(self) -> int:
        return self.ftrl.n

    @property
    def eta(self) -> float:
        return self.ftrl.eta

    @property
    def p(self) -> np.ndarray:
        return self.ftrl.current


def sampling_distribution(p, gamma: float) -> np.ndarray:
    """``(1 - gamma) p + gamma / n``."""
    if not 0.0 <= gamma <= 0.5:
        raise ValueError(f"gamma must lie in [0, 1/2], got {gamma}")
    p = np.asarray(p, dtype=float)
    return (1.0 - gamma) * p + gamma / p.size


def sample_arm(rng: np.random.Generator, pprime: np.ndarray) -> int:
    """Inverse-CDF draw from ``pprime``."""
    cdf = np.cumsum(pprime)
    u = rng.random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), pprime.size - 1)


def iw_estimate(arm: int, raw_loss: float, pprime) -> IwEstimate:
    pprime = np.asarray(pprime, dtype=float)
    prob = float(pprime[arm])
    if not prob > 0.0:
        raise ZeroDivisionError(f"arm {arm} has sampling probability {prob}")
    return IwEstimate(int(arm), float(raw_loss), prob, pprime.size)


def exploration_increment(gamma: float, raw_loss: float, p_arm: float, n: int) -> float:
    """``gamma |l| / ((1 - gamma) p(i) + gamma / n)``, the adaptive-exploration charge."""
    return gamma * abs(raw_loss) / ((1.0 - gamma) * p_arm + gamma / n)


def update_gamma(state: BanditState, est: IwEstimate) -> tuple[float, float]:
    """Exploration rate after the round just observed; returns ``(gamma, gamma_sum)``.

    ``state`` is the pre-round state: ``state.t`` rounds completed, ``state.p``
    the iterate the arm was sampled from.
    """
    n = state.n
    if state.option is Exploration.NON_ADAPTIVE:
        t = state.t + 1
        return min(0.5, math.sqrt(n / t)), state.gamma_sum
    inc = exploration_increment(state.gamma, est.raw_loss, float(state.p[est.arm]), n)
    total = state.gamma_sum + inc
    return n / (2.0 * n + total), total


def play_round(state: BanditState, true_loss) -> tuple[BanditState, BanditRound]:
    """One round against an oblivious loss vector; only ``true_loss[arm]`` is read."""
    true_loss = np.asarray(true_loss, dtype=float)
    if true_loss.shape != (state.n,) or not np.all(np.isfinite(true_loss)):
        raise ValueError(f"loss must be a finite vector of length {state.n}")
    p = state.p
    pprime = sampling_distribution(p, state.gamma)
    arm = sample_arm(state.rng, pprime)
    observed = float(true_loss[arm])
    est = iw_estimate(arm, observed, pprime)
    gamma, gamma_sum = update_gamma(state, est)
    lvec = est.vector()
    ftrl = _adaftrl_step(state.ftrl, lvec)
    new = replace(state, ftrl=ftrl, gamma=gamma, gamma_sum=gamma_sum, t=state.t + 1)
    rec = BanditRound(new.t, arm, observed, p, pprime, state.gamma, state.ftrl.eta,
                      gamma, ftrl.eta, lvec)
    return new, rec


@dataclass(frozen=True)
class Exp3State:
    """Exponential weights on importance-weighted losses with a fixed rate."""

    log_weights: np.ndarray
    eta: float
    G: float
    t: int
    rng: np.random.Generator

    @classmethod
    def start(cls, n: int, horizon: int, G: float, seed=None) -> "Exp3State":
        if not (G > 0 and horizon > 0):
            raise ValueError("G and horizon must be positive")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        eta = math.sqrt(math.log(n) / (horizon * n)) / G if n > 1 else 0.0
        return cls(np.zeros(n), eta, float(G), 0, rng)

    @property
    def p(self) -> np.ndarray:
        w = np.exp(self.log_weights - self.log_weights.max())
        return w / w.sum()


def exp3_round(state: Exp3State, true_loss) -> tuple[Exp3State, BanditRound]:
    true_loss = np.asarray(true_loss, dtype=float)
    p = state.p
    arm = sample_arm(state.rng, p)
    observed = float(true_loss[arm])
    if abs(observed) > state.G:
        raise ScaleViolationError(
            f"round {state.t + 1}: observed |loss| = {abs(observed)} exceeds G = {state.G}")
    est = iw_estimate(arm, observed, p)
    lw = state.log_weights.copy()
    lw[arm] -= state.eta * est.value
    new = replace(state, log_weights=lw - lw.max(), t=state.t + 1)
    return new, BanditRound(new.t, arm, observed, p, p, 0.0, state.eta, 0.0, state.eta,
                            est.vector())
