"""Safeguarded Newton iteration for monotone scalar equations."""

from __future__ import annotations

import math
from typing import Callable, Tuple


class ConvergenceError(RuntimeError):
    pass


def safeguarded_newton(
    fdf: Callable[[float], Tuple[float, float]],
    lo: float,
    hi: float,
    x0: float | None = None,
    *,
    ftol: float = 0.0,
    maxiter: int = 200,
) -> float:
    """Root of an increasing function bracketed by ``f(lo) <= 0 <= f(hi)``.

    ``fdf(x)`` returns ``(f(x), f'(x))``.  Newton steps that leave the current
    bracket are replaced by bisection.  Iteration stops when ``|f| <= ftol``,
    when the bracket collapses to adjacent floats, or when Newton stalls.
    """
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    x = hi if x0 is None else min(max(x0, lo), hi)
    for _ in range(maxiter):
        fx, dfx = fdf(x)
        if not math.isfinite(fx):
            # pole at the open end of the domain: shrink toward lo
            hi = x
            x = 0.5 * (lo + hi)
            continue
        if abs(fx) <= ftol:
            return x
        if fx > 0.0:
            hi = x
        else:
            lo = x
        if dfx > 0.0 and math.isfinite(dfx):
            step = fx / dfx
            xn = x - step
            if abs(step) <= 2e-16 * max(abs(x), 1.0):
                return xn if lo <= xn <= hi else x
        else:
            xn = math.nan
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
            if xn == lo or xn == hi:
                return x
        x = xn
    raise ConvergenceError(f"no convergence after {maxiter} iterations; bracket [{lo}, {hi}]")
