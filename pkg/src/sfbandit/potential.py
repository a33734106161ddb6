"""Potentials, their Legendre functions, and Bregman machinery.

A potential is a convex, strictly increasing map ``psi: (-inf, a) -> (0, inf)``.
It generates the scalar Legendre function ``f`` with ``f' = psi^{-1}`` and the
dual ``f*`` with ``f*' = psi``.  The simplex regularizer is the separable sum
``F(x) = sum_i [f(x_i) - f(1/n)]``.

Two potentials ship with the package:

* ``LOG_BARRIER``: ``psi(u) = -1/u`` on ``(-inf, 0)``, ``f(x) = -log x``.
* ``EXPONENTIAL``: ``psi(u) = exp(u)`` on the real line, ``f(x) = x log x - x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class DomainError(ValueError):
    """Argument lies outside the domain of a potential or its Legendre function."""


class CertificateError(ValueError):
    """Point ``y`` is not covered by a lower-bound certificate."""


@dataclass(frozen=True)
class Potential:
    """A potential together with its closed-form companions.

    All callables are vectorized over numpy arrays.  ``legendre`` is ``f``,
    ``dual`` is ``f*``; the integration constant is fixed per instance and
    cancels in every Bregman quantity.
    """

    name: str
    a: float
    psi: Callable
    dpsi: Callable
    psi_inv: Callable
    legendre: Callable
    dual: Callable

    def legendre_grad(self, x):
        return self.psi_inv(x)

    def legendre_hess(self, x):
        return 1.0 / self.dpsi(self.psi_inv(x))

    def check_primal(self, *xs) -> None:
        for x in xs:
            if np.any(~(np.asarray(x, dtype=float) > 0.0)):
                raise DomainError(f"{self.name}: primal argument must be > 0, got {x!r}")

    def check_dual(self, *us) -> None:
        for u in us:
            if np.any(~(np.asarray(u, dtype=float) < self.a)):
                raise DomainError(f"{self.name}: dual argument must be < {self.a}, got {u!r}")


def _lb_dual(u):
    return -np.log(-np.asarray(u, dtype=float))


LOG_BARRIER = Potential(
    name="log-barrier",
    a=0.0,
    psi=lambda u: -1.0 / np.asarray(u, dtype=float),
    dpsi=lambda u: 1.0 / np.square(np.asarray(u, dtype=float)),
    psi_inv=lambda x: -1.0 / np.asarray(x, dtype=float),
    legendre=lambda x: -np.log(np.asarray(x, dtype=float)),
    # f*(u) = u psi(u) - f(psi(u)) = -1 - log(-u); the -1 is absorbed in C.
    dual=_lb_dual,
)

EXPONENTIAL = Potential(
    name="exponential",
    a=math.inf,
    psi=lambda u: np.exp(np.asarray(u, dtype=float)),
    dpsi=lambda u: np.exp(np.asarray(u, dtype=float)),
    psi_inv=lambda x: np.log(np.asarray(x, dtype=float)),
    legendre=lambda x: _xlogx_minus_x(np.asarray(x, dtype=float)),
    dual=lambda u: np.exp(np.asarray(u, dtype=float)),
)


def _xlogx_minus_x(x):
    return x * np.log(x) - x


def _log_ratio_divergence(r):
    """``r - 1 - log r`` evaluated without cancellation near ``r = 1``."""
    w = np.atleast_1d(np.asarray(r, dtype=float) - 1.0)
    out = w - np.log1p(w)
    small = np.abs(w) < 1e-4
    ws = w[small]
    out[small] = ws * ws * (0.5 - ws * (1.0 / 3.0 - ws * (0.25 - ws / 5.0)))
    return out.reshape(np.shape(r))


def bregman(pot: Potential, y, x):
    """``Breg_f(y || x) = f(y) - f(x) - f'(x)(y - x)``, elementwise."""
    pot.check_primal(y, x)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if pot is LOG_BARRIER:
        out = _log_ratio_divergence(y / x)
    elif pot is EXPONENTIAL:
        # y log(y/x) - y + x
        out = y * np.log(y / x) - y + x
    else:
        out = pot.legendre(y) - pot.legendre(x) - pot.psi_inv(x) * (y - x)
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def dual_bregman(pot: Potential, u, v):
    """``Breg_{f*}(u || v) = f*(u) - f*(v) - psi(v)(u - v)``.

    Equal to ``bregman(pot, psi(v), psi(u))``.
    """
    pot.check_dual(u, v)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = pot.dual(u) - pot.dual(v) - pot.psi(v) * (u - v)
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LowerBoundCertificate:
    """Secant-slope certificate for local-norm lower bounds on ``Breg_f``.

    For ``x = psi(u)`` and any ``0 < y <= psi(u + phi(u))``::

        Breg_f(y || x) >= (x - y)^2 / (2 m(u)),
        m(u) = (psi(u + phi(u)) - psi(u)) / phi(u).

    ``phi`` must be non-negative. When ``phi(u) == 0`` the slope degenerates to
    ``psi'(u)``.
    """

    potential: Potential
    phi: Callable[[float], float]
    name: str = ""

    def slope(self, u: float) -> float:
        pot = self.potential
        h = float(self.phi(u))
        if h < 0.0:
            raise CertificateError(f"phi({u}) = {h} is negative")
        if h == 0.0:
            return float(pot.dpsi(u))
        return float((pot.psi(u + h) - pot.psi(u)) / h)

    def ceiling(self, u: float) -> float:
        """Largest ``y`` the certificate covers at ``x = psi(u)``."""
        return float(self.potential.psi(u + float(self.phi(u))))

    def covers(self, y: float, x: float) -> bool:
        u = float(self.potential.psi_inv(x))
        return 0.0 < y <= self.ceiling(u)


def local_norm_lower_bound(cert: LowerBoundCertificate, y: float, x: float) -> float:
    """``(x - y)^2 / (2 m(psi^{-1}(x)))``, a lower bound on ``bregman(pot, y, x)``."""
    pot = cert.potential
    pot.check_primal(y, x)
    u = float(pot.psi_inv(x))
    ceil = cert.ceiling(u)
    # one ulp of slack: the ceiling is itself a rounded evaluation
    if y > ceil * (1.0 + 4 * np.finfo(float).eps):
        raise CertificateError(f"y={y} exceeds certificate ceiling {ceil} at x={x}")
    return (x - y) ** 2 / (2.0 * cert.slope(u))


# phi(u) = -1 - u sends psi(u + phi(u)) to psi(-1) = 1, so m(u) = psi(u) = x.
# Valid for x in (0, 1].
LOG_BARRIER_CERT = LowerBoundCertificate(
    LOG_BARRIER, phi=lambda u: max(-1.0 - u, 0.0), name="log-barrier/unit"
)

# phi(u) = 1, m(u) = e^u (e - 1).
EXPONENTIAL_CERT = LowerBoundCertificate(EXPONENTIAL, phi=lambda u: 1.0, name="exponential/unit")


def regularizer(pot: Potential, x) -> float:
    """``F(x) = sum_i [f(x_i) - f(1/n)]``; zero at the uniform point."""
    x = np.asarray(x, dtype=float)
    pot.check_primal(x)
    n = x.size
    if pot is LOG_BARRIER:
        return float(-np.sum(np.log(x * n)))
    return float(np.sum(pot.legendre(x)) - n * pot.legendre(1.0 / n))


def regularizer_grad(pot: Potential, x) -> np.ndarray:
    return np.asarray(pot.psi_inv(np.asarray(x, dtype=float)), dtype=float)


def bregman_sum(pot: Potential, x, y) -> float:
    """Bregman divergence of the separable regularizer, ``Breg_F(x || y)``."""
    return float(np.sum(bregman(pot, np.asarray(x, dtype=float), np.asarray(y, dtype=float))))


def mixed_bregman(pot: Potential, alpha: float, beta: float, x, y) -> float:
    """``F(x)/alpha - F(y)/beta - grad F(y)^T (x - y) / beta``.

    Not a divergence: it can be negative when ``alpha != beta``.  With
    ``alpha == beta`` it equals ``Breg_F(x || y) / alpha``.
    """
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"rates must be positive, got alpha={alpha}, beta={beta}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if alpha == beta:
        return bregman_sum(pot, x, y) / alpha
    lin = float(regularizer_grad(pot, y) @ (x - y))
    return regularizer(pot, x) / alpha - regularizer(pot, y) / beta - lin / beta
