"""Brute-force reference computations.

These deliberately avoid the closed forms and root-finders used by the
library: grid search over the simplex, a generic constrained optimizer, and
exhaustive expectation over arms.  Slow, small-n only.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from .potential import EXPONENTIAL, LOG_BARRIER, Potential


def _breg_rows(pot: Potential, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``sum_i Breg_f(q_i || p_i)`` for each row of ``q``, written out by hand."""
    if pot is LOG_BARRIER:
        r = q / p
        return np.sum(r - 1.0 - np.log(r), axis=-1)
    if pot is EXPONENTIAL:
        return np.sum(q * np.log(q / p) - q + p, axis=-1)
    f = pot.legendre
    return np.sum(f(q) - f(p) - pot.psi_inv(p) * (q - p), axis=-1)


def _gap_objective(pot, p, loss, eta, q):
    return (p - q) @ loss - _breg_rows(pot, q, p) / eta


def _simplex_grid(n: int, center: np.ndarray | None, half: float, step: float) -> np.ndarray:
    if n == 2:
        lo, hi = (0.0, 1.0) if center is None else (center[0] - half, center[0] + half)
        a = np.arange(max(lo, step * 1e-3), min(hi, 1.0) + step / 2, step)
        a = a[(a > 0.0) & (a < 1.0)]
        return np.column_stack([a, 1.0 - a])
    if n == 3:
        if center is None:
            axes = [np.arange(step, 1.0, step)] * 2
        else:
            axes = [np.arange(c - half, c + half + step / 2, step) for c in center[:2]]
        a, b = np.meshgrid(*axes, indexing="ij")
        a, b = a.ravel(), b.ravel()
        c = 1.0 - a - b
        keep = (a > 0) & (b > 0) & (c > 0)
        return np.column_stack([a[keep], b[keep], c[keep]])
    raise ValueError("grid oracle supports n in {2, 3}")


def grid_mixability_gap(pot: Potential, p, loss, eta: float, step: float = 1e-3,
                        refinements: int = 3) -> tuple[float, np.ndarray]:
    """Maximize the mixability-gap objective over a simplex grid, then zoom in."""
    p = np.asarray(p, dtype=float)
    loss = np.asarray(loss, dtype=float)
    n = p.size
    grid = _simplex_grid(n, None, 0.0, step)
    vals = _gap_objective(pot, p, loss, eta, grid)
    k = int(np.argmax(vals))
    best, qbest = float(vals[k]), grid[k]
    h = step
    for _ in range(refinements):
        fine = h / 20.0
        grid = _simplex_grid(n, qbest, 2 * h, fine)
        if grid.size == 0:
            break
        vals = _gap_objective(pot, p, loss, eta, grid)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, qbest = float(vals[k]), grid[k]
        h = fine
    # q = p is always feasible and scores 0
    return max(best, 0.0), qbest


def ftrl_argmin(pot: Potential, eta: float, total) -> np.ndarray:
    """``argmin_q F(q) + eta <total, q>`` by SLSQP on the simplex."""
    total = np.asarray(total, dtype=float)
    n = total.size

    def obj(q):
        q = np.maximum(q, 1e-300)
        if pot is LOG_BARRIER:
            reg = -np.sum(np.log(q))
            grad = -1.0 / q
        else:
            reg = np.sum(pot.legendre(q))
            grad = pot.psi_inv(q)
        return reg + eta * total @ q, grad + eta * total

    res = minimize(obj, np.full(n, 1.0 / n), jac=True, method="SLSQP",
                   bounds=[(1e-12, 1.0)] * n,
                   constraints=[{"type": "eq", "fun": lambda q: q.sum() - 1.0,
                                 "jac": lambda q: np.ones_like(q)}],
                   options={"ftol": 1e-15, "maxiter": 1000})
    return res.x


def iw_expectation(pprime, loss) -> np.ndarray:
    """``sum_i pprime_i * (loss_i / pprime_i) e_i`` by enumerating every arm."""
    pprime = np.asarray(pprime, dtype=float)
    loss = np.asarray(loss, dtype=float)
    n = pprime.size
    out = np.zeros(n)
    for i in range(n):
        est = np.zeros(n)
        est[i] = loss[i] / pprime[i]
        out += pprime[i] * est
    return out


def exp_weights_oracle(n: int, eta: float, rounds) -> np.ndarray:
    """Exp3 weights after a list of ``(arm, observed_loss)`` pairs, computed by hand."""
    w = [1.0] * n
    for arm, loss in rounds:
        total = sum(w)
        prob = w[arm] / total
        w[arm] *= float(np.exp(-eta * loss / prob))
    total = sum(w)
    return np.array([x / total for x in w])
