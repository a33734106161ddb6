"""Property suites behind ``sfbandit verify``.

Each check returns a :class:`CheckResult`; ``run_all`` collects them.  Sizes
and tolerances match the package's acceptance tests.
"""

from __future__ import annotations

import math
import time
from typing import Callable, NamedTuple

import numpy as np

from . import ftrl, oracles
from .potential import (
    EXPONENTIAL,
    EXPONENTIAL_CERT,
    LOG_BARRIER,
    LOG_BARRIER_CERT,
    bregman,
    dual_bregman,
    local_norm_lower_bound,
)
from .simplex import shifted_vertex, solve_lambda, solve_mixability_gap, stability_bound


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def check_dual_bregman(rng) -> CheckResult:
    worst = 0.0
    for pot, sample in ((LOG_BARRIER, lambda: -np.exp(rng.uniform(-5, 5, 2))),
                        (EXPONENTIAL, lambda: rng.uniform(-10, 5, 2))):
        for _ in range(1000):
            u, v = sample()
            lhs = bregman(pot, pot.psi(v), pot.psi(u))
            rhs = dual_bregman(pot, u, v)
            worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return CheckResult("bregman/dual-transform", worst <= 1e-10, f"max scaled error {worst:.3e}")


def check_log_barrier_region(rng) -> CheckResult:
    g = np.linspace(0.01, 1.0, 100)
    x, y = np.meshgrid(g, g, indexing="ij")
    lhs = y / x - 1.0 - np.log(y / x)
    rhs = (x - y) ** 2 / (2.0 * x)
    worst = float(np.min(lhs - rhs))
    return CheckResult("bregman/log-barrier-region", worst >= -1e-12, f"min slack {worst:.3e}")


def check_certificates(rng) -> CheckResult:
    worst = math.inf
    for cert in (LOG_BARRIER_CERT, EXPONENTIAL_CERT):
        pot = cert.potential
        for _ in range(1000):
            if pot is LOG_BARRIER:
                x = rng.uniform(1e-6, 1.0)
            else:
                x = math.exp(rng.uniform(-8, 3))
            ceil = cert.ceiling(float(pot.psi_inv(x)))
            y = rng.uniform(1e-9, ceil)
            slack = bregman(pot, y, x) - local_norm_lower_bound(cert, y, x)
            worst = min(worst, slack / (1.0 + bregman(pot, y, x)))
    return CheckResult("bregman/local-norm-certificates", worst >= -1e-12, f"min slack {worst:.3e}")


def check_lambda(rng) -> CheckResult:
    worst = 0.0
    for pot in (LOG_BARRIER, EXPONENTIAL):
        for _ in range(1000):
            theta = rng.uniform(-50, 50, rng.integers(2, 33))
            lam = solve_lambda(pot, theta)
            worst = max(worst, abs(float(np.sum(pot.psi(theta + lam))) - 1.0))
    golden = abs(solve_lambda(LOG_BARRIER, [0.0, -1.0]) - (-1.0 - math.sqrt(5.0)) / 2.0)
    ok = worst <= 1e-12 and golden <= 1e-10
    return CheckResult("simplex/lambda", ok, f"max residual {worst:.3e}; golden error {golden:.3e}")


def check_gap(rng) -> CheckResult:
    worst = 0.0
    bound_viol = -math.inf
    for k in range(100):
        n = 2 + k % 2
        p = rng.dirichlet(np.ones(n))
        eta = 10 ** rng.uniform(-2, 1)
        if k % 3 == 0:
            loss = np.zeros(n)
            loss[rng.integers(n)] = -(10 ** rng.uniform(-1, 1.5))
        else:
            loss = 3.0 * rng.standard_normal(n)
        m, _ = solve_mixability_gap(LOG_BARRIER, p, loss, eta)
        ref, _ = oracles.grid_mixability_gap(LOG_BARRIER, p, loss, eta)
        worst = max(worst, abs(m - ref))
        bound_viol = max(bound_viol, -m, m - stability_bound(p, loss, eta) - 1e-10)
    ok = worst <= 1e-4 and bound_viol <= 0.0
    return CheckResult("simplex/mixability-gap", ok,
                       f"max oracle gap {worst:.3e}; worst bound excess {bound_viol:.3e}")


def check_regret_identity(rng) -> CheckResult:
    worst = 0.0
    for k in range(50):
        losses = rng.standard_normal((50, 5))
        trace = ftrl.run_adaftrl(losses)
        c = shifted_vertex(5, k % 5, 0.1)
        lhs, rhs = ftrl.regret_equality_sides(trace, c)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return CheckResult("ftrl/regret-identity", worst <= 1e-8, f"max scaled residual {worst:.3e}")


def check_adaftrl_bound(rng) -> CheckResult:
    worst = math.inf
    for k in range(100):
        n = 5
        if k % 2:
            losses = np.zeros((200, n))
            losses[np.arange(200), rng.integers(0, n, 200)] = -(10 ** rng.uniform(0, 3, 200))
        else:
            losses = rng.uniform(-1, 1, (200, n))
        trace = ftrl.run_adaftrl(losses)
        for i in range(n):
            worst = min(worst, ftrl.verify_adaftrl_bound(trace, shifted_vertex(n, i, 0.01)))
    return CheckResult("ftrl/adaftrl-inequality", worst >= -1e-8, f"min slack {worst:.3e}")


def check_summation(rng) -> CheckResult:
    worst = math.inf
    for _ in range(1000):
        T = int(rng.integers(1, 200))
        L = 10 ** rng.uniform(-2, 2)
        alpha, beta, A = (10 ** rng.uniform(-2, 2, 3)).tolist()
        M = rng.uniform(0, L, T) * (rng.random(T) < 0.8)
        a = alpha / (beta + np.concatenate([[0.0], np.cumsum(M)]))
        g = M / a[:-1]
        worst = min(worst, ftrl.verify_summation_lemma(A, L, alpha, beta, M, g))
    return CheckResult("ftrl/summation-lemma", worst >= 0.0, f"min slack {worst:.3e}")


SUITE: tuple[Callable, ...] = (
    check_dual_bregman,
    check_log_barrier_region,
    check_certificates,
    check_lambda,
    check_gap,
    check_regret_identity,
    check_adaftrl_bound,
    check_summation,
)


def run_all(seed: int = 0) -> list[CheckResult]:
    results = []
    for check in SUITE:
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        res = check(rng)
        results.append(res._replace(seconds=time.perf_counter() - t0))
    return results
