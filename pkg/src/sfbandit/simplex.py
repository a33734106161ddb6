"""FTRL iterates on the probability simplex and the exact mixability gap.

Both computations reduce to the same scalar problem: given a dual vector
``theta``, find the unique ``lam`` with ``sum_i psi(theta_i + lam) = 1``.
The map ``lam -> sum_i psi(theta_i + lam)`` is convex and increasing, and
after shifting ``theta`` so its maximum is zero the root is bracketed by
``[psi^{-1}(1/n), psi^{-1}(1)]`` for every potential.
"""

from __future__ import annotations

import math

import numpy as np

from .potential import (
    LOG_BARRIER,
    DomainError,
    Potential,
    _log_ratio_divergence,
    bregman,
    regularizer,
)
from .roots import safeguarded_newton

SUM_TOL = 1e-10


def uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def shifted_vertex(n: int, i: int, eps: float) -> np.ndarray:
    """``(1 - eps) e_i + eps / n``: a vertex pulled into the interior."""
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    q = np.full(n, eps / n)
    q[i] += 1.0 - eps
    return q


def check_simplex_point(p, name: str = "p") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError(f"{name} must be a non-empty vector")
    if not np.all(p > 0.0):
        raise DomainError(f"{name} must be strictly positive, got {p}")
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise DomainError(f"{name} must sum to 1, sums to {p.sum()!r}")
    return p


class CumulativeLoss:
    """Running vector sum of losses with Neumaier compensation.

    Importance-weighted losses reach magnitudes far beyond the per-round
    increments, so the compensation term keeps the sum exact to a few ulps.
    """

    __slots__ = ("_sum", "_comp", "t")

    def __init__(self, n: int):
        self._sum = np.zeros(n)
        self._comp = np.zeros(n)
        self.t = 0

    @property
    def n(self) -> int:
        return self._sum.size

    @property
    def sum(self) -> np.ndarray:
        return self._sum + self._comp

    def add(self, loss) -> "CumulativeLoss":
        """Return a new accumulator with ``loss`` added."""
        loss = np.asarray(loss, dtype=float)
        if loss.shape != self._sum.shape:
            raise ValueError(f"loss has shape {loss.shape}, expected {self._sum.shape}")
        out = CumulativeLoss.__new__(CumulativeLoss)
        s = self._sum + loss
        big = np.abs(self._sum) >= np.abs(loss)
        out._comp = self._comp + np.where(big, (self._sum - s) + loss, (loss - s) + self._sum)
        out._sum = s
        out.t = self.t + 1
        return out

    def copy(self) -> "CumulativeLoss":
        out = CumulativeLoss.__new__(CumulativeLoss)
        out._sum = self._sum.copy()
        out._comp = self._comp.copy()
        out.t = self.t
        return out

    @classmethod
    def from_sum(cls, total, t: int = 0) -> "CumulativeLoss":
        total = np.asarray(total, dtype=float)
        out = cls(total.size)
        out._sum = total.copy()
        out.t = t
        return out


_LIST_MAX = 64


def _solve_shifted(pot: Potential, theta: np.ndarray):
    """Solve on ``theta - max(theta)``; returns ``(lam_shifted, theta_shifted)``."""
    shifted = theta - theta.max()
    n = shifted.size
    lo = float(pot.psi_inv(1.0 / n))
    hi = float(pot.psi_inv(1.0))
    if n == 1:
        return hi, shifted
    if pot is LOG_BARRIER:
        # Newton on 1 - 1/g: 1/g is a harmonic mean of affine terms, hence
        # concave, so iterates from the right end decrease monotonically.
        if n <= _LIST_MAX:
            vals = shifted.tolist()

            def fdf(lam):
                g = 0.0
                dg = 0.0
                for x in vals:
                    r = -1.0 / (x + lam)
                    g += r
                    dg += r * r
                return 1.0 - 1.0 / g, dg / (g * g)
        else:
            def fdf(lam):
                r = -1.0 / (shifted + lam)
                g = float(r.sum())
                return 1.0 - 1.0 / g, float(r @ r) / (g * g)
    else:
        def fdf(lam):
            u = shifted + lam
            g = float(np.sum(pot.psi(u)))
            return math.log(g), float(np.sum(pot.dpsi(u))) / g

    lam = safeguarded_newton(fdf, lo, hi, hi)
    return lam, shifted


def solve_lambda(pot: Potential, theta) -> float:
    """Unique ``lam`` with ``sum_i psi(theta_i + lam) = 1``."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size == 0 or not np.all(np.isfinite(theta)):
        raise DomainError(f"theta must be a finite non-empty vector, got {theta}")
    lam, _ = _solve_shifted(pot, theta)
    return lam - float(theta.max())


def normalize_dual(pot: Potential, theta) -> np.ndarray:
    """``psi(theta + lam(theta))``, the simplex point with dual coordinates ``theta``."""
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise DomainError(f"theta must be finite, got {theta}")
    return _normalize(pot, theta)


def _normalize(pot: Potential, theta: np.ndarray) -> np.ndarray:
    lam, shifted = _solve_shifted(pot, theta)
    return np.asarray(pot.psi(shifted + lam), dtype=float)


def ftrl_iterate(pot: Potential, eta: float, cumloss) -> np.ndarray:
    """``argmin_q F(q) + eta <sum_s l_s, q>`` over the simplex, in closed form."""
    if not eta > 0.0:
        raise DomainError(f"eta must be positive, got {eta}")
    total = cumloss.sum if isinstance(cumloss, CumulativeLoss) else np.asarray(cumloss, dtype=float)
    if total.size == 1:
        return np.ones(1)
    return normalize_dual(pot, -eta * total)


def _ftrl_iterate(pot: Potential, eta: float, total: np.ndarray) -> np.ndarray:
    if total.size == 1:
        return np.ones(1)
    return _normalize(pot, -eta * total)


def solve_mixability_gap(pot: Potential, p, loss, eta: float):
    """Exact mixability gap and its maximizer.

    Returns ``(M, q_star)`` where::

        M = sup_q  loss.(p - q) - Breg_F(q || p) / eta.

    First-order conditions give ``q* = psi(psi^{-1}(p) - eta*loss + lam)``,
    i.e. an FTRL-type normalization, and substituting back collapses the
    objective to ``Breg_F(p || q*) / eta``, which is evaluated directly.
    """
    p = check_simplex_point(p)
    loss = np.asarray(loss, dtype=float)
    if not eta > 0.0:
        raise DomainError(f"eta must be positive, got {eta}")
    if loss.shape != p.shape or not np.all(np.isfinite(loss)):
        raise DomainError("loss must be a finite vector matching p")
    return _gap(pot, p, loss, eta)


def _gap(pot: Potential, p: np.ndarray, loss: np.ndarray, eta: float):
    if p.size == 1 or loss.max() == loss.min():
        return 0.0, p.copy()
    q = _normalize(pot, pot.psi_inv(p) - eta * loss)
    if pot is LOG_BARRIER:
        value = float(np.sum(_log_ratio_divergence(p / q)))
    else:
        value = float(np.sum(bregman(pot, p, q)))
    return value / eta, q


def mixability_gap(pot: Potential, p, loss, eta: float) -> float:
    return solve_mixability_gap(pot, p, loss, eta)[0]


def stability_bound(p, loss, eta: float) -> float:
    """``min(2 ||loss||_inf, (eta/2) p.loss^2)``: the log-barrier ceiling on the gap."""
    p = np.asarray(p, dtype=float)
    loss = np.asarray(loss, dtype=float)
    return min(2.0 * float(np.max(np.abs(loss))), 0.5 * eta * float(p @ (loss * loss)))


def ftrl_objective(pot: Potential, eta: float, total, q) -> float:
    return regularizer(pot, q) + eta * float(np.dot(total, q))


__all__ = [
    "CumulativeLoss",
    "check_simplex_point",
    "ftrl_iterate",
    "ftrl_objective",
    "mixability_gap",
    "normalize_dual",
    "shifted_vertex",
    "solve_lambda",
    "solve_mixability_gap",
    "stability_bound",
    "uniform",
]
