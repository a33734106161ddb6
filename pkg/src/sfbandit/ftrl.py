"""Full-information FTRL / AdaFTRL on the simplex and regret diagnostics.

AdaFTRL uses the learning rate ``eta_t = alpha / (beta + sum_{s<=t} M_s)``
where ``M_s`` is the mixability gap of round ``s`` evaluated at the rate and
iterate that were in force when the loss arrived.  The ``verify_*`` functions
evaluate both sides of the regret identity and inequalities on a recorded
trace; they return residuals / slacks rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .potential import LOG_BARRIER, Potential, bregman_sum, mixed_bregman, regularizer
from .simplex import CumulativeLoss, _ftrl_iterate, _gap, ftrl_iterate, solve_mixability_gap, uniform


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class FtrlState:
    pot: Potential
    cumloss: CumulativeLoss
    eta: float
    gap_sum: float
    alpha: float
    beta: float
    current: np.ndarray
    last_gap: float = 0.0
    last_argmax: np.ndarray | None = None

    @classmethod
    def start(cls, n: int, alpha: float | None = None, beta: float = 1.0,
              pot: Potential = LOG_BARRIER) -> "FtrlState":
        """Initial state: uniform iterate, ``eta_0 = alpha / beta``.

        ``alpha`` defaults to ``n``, the bandit algorithm's choice.
        """
        alpha = float(n) if alpha is None else float(alpha)
        if not (alpha > 0 and beta > 0):
            raise ValueError("alpha and beta must be positive")
        return cls(pot, CumulativeLoss(n), alpha / beta, 0.0, alpha, float(beta), uniform(n))

    @property
    def n(self) -> int:
        return self.current.size


def adaftrl_step(state: FtrlState, loss) -> FtrlState:
    """One AdaFTRL round: gap at the old rate and iterate, new rate, new iterate."""
    loss = np.asarray(loss, dtype=float)
    if loss.shape != state.current.shape or not np.all(np.isfinite(loss)):
        raise ValueError(f"loss must be a finite vector of length {state.n}")
    return _adaftrl_step(state, loss)


def _adaftrl_step(state: FtrlState, loss: np.ndarray) -> FtrlState:
    gap, qstar = _gap(state.pot, state.current, loss, state.eta)
    gap_sum = state.gap_sum + gap
    eta = state.alpha / (state.beta + gap_sum)
    cumloss = state.cumloss.add(loss)
    current = _ftrl_iterate(state.pot, eta, cumloss.sum)
    return FtrlState(state.pot, cumloss, eta, gap_sum, state.alpha, state.beta,
                     current, gap, qstar)


@dataclass
class FullInfoTrace:
    """Iterates ``p_1..p_{T+1}``, losses, and rates ``eta_0..eta_T`` of one run."""

    pot: Potential
    alpha: float
    beta: float
    iterates: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    etas: list = field(default_factory=list)
    gaps: list = field(default_factory=list)
    argmax: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.losses)


def run_adaftrl(losses, pot: Potential = LOG_BARRIER, alpha: float | None = None,
                beta: float = 1.0) -> FullInfoTrace:
    losses = np.asarray(losses, dtype=float)
    state = FtrlState.start(losses.shape[1], alpha, beta, pot)
    trace = FullInfoTrace(pot, state.alpha, state.beta, [state.current], [], [state.eta])
    for loss in losses:
        state = adaftrl_step(state, loss)
        trace.iterates.append(state.current)
        trace.losses.append(loss)
        trace.etas.append(state.eta)
        trace.gaps.append(state.last_gap)
        trace.argmax.append(state.last_argmax)
    return trace


def run_ftrl(losses, etas, pot: Potential = LOG_BARRIER) -> FullInfoTrace:
    """FTRL with a prescribed rate schedule ``eta_0..eta_T`` (length ``T + 1``)."""
    losses = np.asarray(losses, dtype=float)
    etas = [float(e) for e in etas]
    if len(etas) != len(losses) + 1:
        raise ValueError("need one rate per round plus eta_0")
    n = losses.shape[1]
    trace = FullInfoTrace(pot, math.nan, math.nan, [uniform(n)], [], [etas[0]])
    cum = CumulativeLoss(n)
    for t, loss in enumerate(losses, start=1):
        gap, qstar = solve_mixability_gap(pot, trace.iterates[-1], loss, etas[t - 1])
        cum = cum.add(loss)
        trace.iterates.append(ftrl_iterate(pot, etas[t], cum))
        trace.losses.append(loss)
        trace.etas.append(etas[t])
        trace.gaps.append(gap)
        trace.argmax.append(qstar)
    return trace


def _regret(trace: FullInfoTrace, comparator) -> float:
    return float(sum(loss @ (p - comparator) for loss, p in zip(trace.losses, trace.iterates)))


def regret_equality_sides(trace: FullInfoTrace, comparator) -> tuple[float, float]:
    """Both sides of the FTRL regret identity against ``comparator``.

    LHS is the linear regret; RHS is the telescoped Bregman term scaled by
    ``1/eta_T`` plus per-round stability terms built from mixed Bregmans.
    """
    pot = trace.pot
    c = np.asarray(comparator, dtype=float)
    T = len(trace)
    lhs = _regret(trace, c)
    ps, etas = trace.iterates, trace.etas
    head = (bregman_sum(pot, c, ps[0]) - bregman_sum(pot, c, ps[T])) / etas[T]
    stab = 0.0
    for t in range(1, T + 1):
        stab += float(trace.losses[t - 1] @ (ps[t - 1] - ps[t]))
        stab -= mixed_bregman(pot, etas[t], etas[t - 1], ps[t], ps[t - 1])
    return lhs, head + stab


def verify_regret_equality(trace: FullInfoTrace, comparator) -> float:
    """``|LHS - RHS|`` of the regret identity; should sit at rounding level."""
    etas = np.asarray(trace.etas)
    if np.any(np.diff(etas) > 0.0):
        raise PreconditionError("regret identity is checked only for non-increasing rates")
    lhs, rhs = regret_equality_sides(trace, comparator)
    return abs(lhs - rhs)


def adaftrl_bound(trace: FullInfoTrace, comparator, exact_regularizer: bool = True) -> float:
    """Right-hand side of the AdaFTRL regret inequality.

    With the log-barrier the per-round ratio ``M_t / eta_{t-1}`` is bounded by
    ``g_t = p_t.l_t^2 / 2``; other potentials use ``g_t = M_t / eta_{t-1}``.
    With ``exact_regularizer=False`` the comparator is assumed to be a shifted
    vertex and ``F(comparator)`` is replaced by ``n log(1/eps)``.
    """
    c = np.asarray(comparator, dtype=float)
    n = c.size
    if exact_regularizer:
        A = regularizer(trace.pot, c)
    else:
        eps = n * float(c.min())
        A = n * math.log(1.0 / eps)
    sup = max((float(np.max(np.abs(l))) for l in trace.losses), default=0.0)
    if trace.pot is LOG_BARRIER:
        g = sum(0.5 * float(p @ (l * l)) for p, l in zip(trace.iterates, trace.losses))
    else:
        g = sum(m / e for m, e in zip(trace.gaps, trace.etas))
    alpha, beta = trace.alpha, trace.beta
    return (A * (beta / alpha + 2.0 * sup / alpha) + 2.0 * sup
            + math.sqrt(2.0 * g) * (A / math.sqrt(alpha) + math.sqrt(alpha)))


def verify_adaftrl_bound(trace: FullInfoTrace, comparator, exact_regularizer: bool = True) -> float:
    """``RHS - LHS`` of the AdaFTRL regret inequality (non-negative when it holds)."""
    return adaftrl_bound(trace, comparator, exact_regularizer) - _regret(trace, comparator)


def summation_bound(A: float, L: float, alpha: float, beta: float, M_seq, g_seq) -> tuple[float, float]:
    """Both sides of the summation lemma for ``A / a_T + sum_t M_t``.

    ``a_t = alpha / (beta + sum_{s<=t} M_s)``.  Raises ``PreconditionError`` if
    some ``M_t`` leaves ``[0, L]`` or exceeds ``g_t a_{t-1}``.
    """
    M = np.asarray(M_seq, dtype=float)
    g = np.asarray(g_seq, dtype=float)
    if M.shape != g.shape:
        raise PreconditionError("M and g sequences differ in length")
    if not (A > 0 and L > 0 and alpha > 0 and beta > 0):
        raise PreconditionError("A, L, alpha, beta must be positive")
    if np.any(M < 0.0) or np.any(M > L):
        raise PreconditionError(f"M_t must lie in [0, {L}]")
    csum = np.concatenate([[0.0], np.cumsum(M)])
    a = alpha / (beta + csum)
    ratio = M / a[:-1]
    if np.any(ratio > g * (1.0 + 1e-12) + 1e-300):
        raise PreconditionError("M_t / a_{t-1} <= g_t violated")
    lhs = A / a[-1] + float(csum[-1])
    rhs = (A * (beta / alpha + L / alpha) + L
           + math.sqrt(2.0 * float(g.sum())) * (A / math.sqrt(alpha) + math.sqrt(alpha)))
    return lhs, rhs


def verify_summation_lemma(A: float, L: float, alpha: float, beta: float, M_seq, g_seq) -> float:
    lhs, rhs = summation_bound(A, L, alpha, beta, M_seq, g_seq)
    return rhs - lhs


def stability_term(pot: Potential, p, loss) -> float:
    """``sup_q loss.(p - q) - Breg_F(q || p)``; equals ``eta * M(eta)`` at ``eta * loss``."""
    return solve_mixability_gap(pot, p, loss, 1.0)[0]
