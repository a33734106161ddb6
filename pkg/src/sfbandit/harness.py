"""Seeded regret experiments and their on-disk format.

``run_experiment`` plays one policy against one materialized loss matrix
for each player seed and aggregates the realized regrets.  ``emit`` writes a
JSON summary plus one CSV trace per seed with columns
``t, arm, loss, gamma, eta, cum_regret``.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .adversaries import AdversaryConfig, generate, norms
from .bandit import BanditState, Exp3State, Exploration, exp3_round, play_round

OUT_DIR_ENV = "SFBANDIT_OUT_DIR"
TRACE_COLUMNS = ("t", "arm", "loss", "gamma", "eta", "cum_regret")
POLICIES = ("scale-free-opt1", "scale-free-opt2", "exp3")


@dataclass(frozen=True)
class Policy:
    name: str
    G: float | None = None

    def __post_init__(self):
        if self.name not in POLICIES:
            raise ValueError(f"unknown policy {self.name!r}; expected one of {POLICIES}")
        if self.name == "exp3" and not (self.G is not None and self.G > 0):
            raise ValueError("exp3 needs a positive loss range G")

    @classmethod
    def parse(cls, text: str, G: float | None = None) -> "Policy":
        aliases = {"opt1": "scale-free-opt1", "opt2": "scale-free-opt2",
                   "non-adaptive": "scale-free-opt1", "adaptive": "scale-free-opt2"}
        return cls(aliases.get(text, text), G)


@dataclass
class RoundRecords:
    """Per-round trace of one seed, column-oriented."""

    seed: int
    t: np.ndarray
    arm: np.ndarray
    loss: np.ndarray
    gamma: np.ndarray
    eta: np.ndarray
    cum_regret: np.ndarray

    @property
    def regret(self) -> float:
        return float(self.cum_regret[-1]) if self.cum_regret.size else 0.0

    def __len__(self) -> int:
        return self.t.size


@dataclass
class RegretSummary:
    policy: str
    config: dict
    seeds: list
    regrets: list
    mean_regret: float
    stderr: float
    Linf: float
    L1: float
    L2: float
    Sinf: float
    bound_T: float
    bound_L1: float
    ratio_T: float
    ratio_L1: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def regret_bounds(n: int, T: int, Linf: float, L1: float, L2: float) -> tuple[float, float]:
    """Leading terms of the two scale-free rates, without logs or constants.

    ``sqrt(n L2) + Linf sqrt(n T)`` (fixed exploration) and
    ``sqrt(n L2) + Linf sqrt(n L1)`` (adaptive exploration).
    """
    base = math.sqrt(n * L2)
    return base + Linf * math.sqrt(n * T), base + Linf * math.sqrt(n * L1)


def play(policy: Policy, losses: np.ndarray, seed: int) -> RoundRecords:
    """Run one seed of ``policy`` on ``losses`` and return its trace."""
    T, n = losses.shape
    rng = np.random.default_rng(seed)
    arm = np.empty(T, dtype=np.int64)
    inc = np.empty(T)
    gam = np.empty(T)
    eta = np.empty(T)
    if policy.name == "exp3":
        state = Exp3State.start(n, T, policy.G, rng)
        step = exp3_round
    else:
        option = Exploration.NON_ADAPTIVE if policy.name.endswith("1") else Exploration.ADAPTIVE
        state = BanditState.start(n, option, rng)
        step = play_round
    for t in range(T):
        state, rec = step(state, losses[t])
        arm[t] = rec.arm
        inc[t] = rec.loss
        gam[t] = rec.gamma
        eta[t] = rec.eta
    best_so_far = np.min(np.cumsum(losses, axis=0), axis=1)
    cum_regret = np.cumsum(inc) - best_so_far
    return RoundRecords(int(seed), np.arange(1, T + 1), arm, inc, gam, eta, cum_regret)


def _play_star(args):
    return play(*args)


def run_experiment(policy: Policy | str, config: AdversaryConfig, seeds,
                   workers: int = 1) -> tuple[RegretSummary, list[RoundRecords]]:
    """Replicated runs of ``policy`` against the matrix generated from ``config``.

    The loss matrix is fixed by ``config.seed``; ``seeds`` drive the player
    only, so the mean over seeds estimates the expected regret.
    """
    if isinstance(policy, str):
        policy = Policy.parse(policy)
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("at least one seed is required")
    losses = generate(config)
    jobs = [(policy, losses, s) for s in seeds]
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_play_star, jobs))
    else:
        records = [play(*job) for job in jobs]
    return summarize(policy, config, losses, records), records


def summarize(policy: Policy, config: AdversaryConfig, losses: np.ndarray,
              records: list[RoundRecords]) -> RegretSummary:
    regrets = [r.regret for r in records]
    k = len(regrets)
    mean = float(np.mean(regrets))
    se = float(np.std(regrets, ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    nm = norms(losses)
    T, n = losses.shape
    b_T, b_L1 = regret_bounds(n, T, nm.Linf, nm.L1, nm.L2)
    ratio = lambda b: mean / b if b > 0 else (0.0 if mean == 0 else math.inf)
    return RegretSummary(
        policy=policy.name, config=config.to_dict(), seeds=[r.seed for r in records],
        regrets=regrets, mean_regret=mean, stderr=se,
        Linf=nm.Linf, L1=nm.L1, L2=nm.L2, Sinf=nm.Sinf,
        bound_T=b_T, bound_L1=b_L1, ratio_T=ratio(b_T), ratio_L1=ratio(b_L1),
        extra={"G": policy.G} if policy.G is not None else {},
    )


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "results"))


def emit(summary: RegretSummary, records: list[RoundRecords], out_dir=None) -> list[Path]:
    """Write ``summary.json`` and ``trace_seed<seed>.csv`` files; return their paths."""
    if not summary.seeds:
        raise ValueError("refusing to emit a summary with zero seeds")
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = out / "summary.json"
        path.write_text(json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n")
        written.append(path)
        for rec in records:
            path = out / f"trace_seed{rec.seed}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(TRACE_COLUMNS)
                for row in zip(rec.t.tolist(), rec.arm.tolist(), rec.loss.tolist(),
                               rec.gamma.tolist(), rec.eta.tolist(), rec.cum_regret.tolist()):
                    w.writerow([row[0], row[1]] + [repr(x) for x in row[2:]])
            written.append(path)
    except OSError as exc:
        raise OSError(f"failed writing results to {exc.filename or out}: {exc.strerror}") from exc
    return written


def read_trace(path) -> dict:
    """Load a trace CSV back into column arrays."""
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != TRACE_COLUMNS:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    cols = list(zip(*rows[1:])) if len(rows) > 1 else [()] * len(TRACE_COLUMNS)
    out = {}
    for name, col in zip(TRACE_COLUMNS, cols):
        dtype = np.int64 if name in ("t", "arm") else float
        out[name] = np.array(col, dtype=dtype)
    return out
