"""Oblivious loss sequences.

Every generator materializes the full ``T x n`` matrix from ``(config, seed)``
before play starts, so the sequence cannot react to the player.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

KINDS = (
    "zero",
    "bounded-uniform",
    "bernoulli-gap",
    "sparse-heavy",
    "sign-mixed",
    "drifting-best-arm",
    "rescaled",
)


class InvalidConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AdversaryConfig:
    """Loss-sequence description.

    Parameters used per kind:

    ``bounded-uniform``
        i.i.d. ``U[0, 1]`` entries.
    ``bernoulli-gap``
        Bernoulli losses; arm ``best`` has mean ``0.5 - gap``, the rest ``0.5``.
    ``sparse-heavy``
        each active round has exactly ``k`` coordinates equal to ``+-magnitude``,
        the rest 0; a round is active with probability ``density``.
    ``sign-mixed``
        i.i.d. ``U[-magnitude, magnitude]`` entries.
    ``drifting-best-arm``
        Bernoulli losses whose low-mean arm advances every ``period`` rounds.
    ``rescaled``
        ``factor`` times the matrix of ``inner``.
    """

    kind: str
    n: int
    T: int
    seed: int = 0
    gap: float = 0.3
    best: int = 0
    k: int = 1
    magnitude: float = 1.0
    density: float = 1.0
    period: int = 100
    factor: float = 1.0
    inner: "AdversaryConfig | None" = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidConfigError(f"unknown adversary kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1 or self.T < 1:
            raise InvalidConfigError(f"n and T must be positive, got n={self.n}, T={self.T}")
        if self.kind == "bernoulli-gap" and not (0.0 <= self.gap <= 0.5 and 0 <= self.best < self.n):
            raise InvalidConfigError("bernoulli-gap needs gap in [0, 0.5] and best in [0, n)")
        if self.kind == "sparse-heavy" and not (1 <= self.k <= self.n):
            raise InvalidConfigError(f"sparse-heavy needs 1 <= k <= n, got k={self.k}")
        if self.kind == "sparse-heavy" and not (0.0 < self.density <= 1.0):
            raise InvalidConfigError(f"density must lie in (0, 1], got {self.density}")
        if self.kind in ("sparse-heavy", "sign-mixed") and not self.magnitude > 0:
            raise InvalidConfigError("magnitude must be positive")
        if self.kind == "drifting-best-arm" and self.period < 1:
            raise InvalidConfigError("period must be >= 1")
        if self.kind == "rescaled":
            if self.inner is None:
                raise InvalidConfigError("rescaled needs an inner config")
            if (self.inner.n, self.inner.T) != (self.n, self.T):
                raise InvalidConfigError("rescaled must keep the inner shape")
            if not math.isfinite(self.factor):
                raise InvalidConfigError("factor must be finite")

    @classmethod
    def rescale(cls, inner: "AdversaryConfig", factor: float) -> "AdversaryConfig":
        return cls("rescaled", inner.n, inner.T, inner.seed, factor=factor, inner=inner)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "T": self.T, "seed": self.seed}
        if self.kind == "bernoulli-gap":
            d.update(gap=self.gap, best=self.best)
        elif self.kind == "sparse-heavy":
            d.update(k=self.k, magnitude=self.magnitude, density=self.density)
        elif self.kind == "sign-mixed":
            d.update(magnitude=self.magnitude)
        elif self.kind == "drifting-best-arm":
            d.update(gap=self.gap, period=self.period)
        elif self.kind == "rescaled":
            d.update(factor=self.factor, inner=self.inner.to_dict())
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AdversaryConfig":
        d = dict(d)
        inner = d.pop("inner", None)
        if inner is not None:
            d["inner"] = cls.from_dict(inner)
        return cls(**d)


def generate(config: AdversaryConfig) -> np.ndarray:
    """The full loss matrix, shape ``(T, n)``."""
    n, T = config.n, config.T
    kind = config.kind
    if kind == "rescaled":
        return config.factor * generate(config.inner)
    rng = np.random.default_rng(config.seed)
    if kind == "zero":
        return np.zeros((T, n))
    if kind == "bounded-uniform":
        return rng.random((T, n))
    if kind == "bernoulli-gap":
        means = np.full(n, 0.5)
        means[config.best] -= config.gap
        return (rng.random((T, n)) < means).astype(float)
    if kind == "sparse-heavy":
        out = np.zeros((T, n))
        # argpartition of uniform keys gives k distinct coordinates per row
        cols = np.argpartition(rng.random((T, n)), config.k - 1, axis=1)[:, : config.k]
        signs = np.where(rng.random((T, config.k)) < 0.5, -1.0, 1.0)
        np.put_along_axis(out, cols, signs * config.magnitude, axis=1)
        if config.density < 1.0:
            out[rng.random(T) >= config.density] = 0.0
        return out
    if kind == "sign-mixed":
        return config.magnitude * (2.0 * rng.random((T, n)) - 1.0)
    if kind == "drifting-best-arm":
        means = np.full((T, n), 0.5)
        phase = (np.arange(T) // config.period) % n
        means[np.arange(T), phase] -= config.gap
        return (rng.random((T, n)) < means).astype(float)
    raise InvalidConfigError(kind)


class Norms(NamedTuple):
    Linf: float
    L1: float
    L2: float
    Sinf: float


def norms(losses) -> Norms:
    """``(max_t |l_t|_inf, sum_t |l_t|_1, sum_t |l_t|_2^2, |sum_t l_t|_inf)``."""
    losses = np.asarray(losses, dtype=float)
    if losses.size == 0:
        return Norms(0.0, 0.0, 0.0, 0.0)
    a = np.abs(losses)
    return Norms(float(a.max()), float(a.sum()), float(np.sum(losses * losses)),
                 float(np.max(np.abs(losses.sum(axis=0)))))


def best_arm(losses) -> int:
    """Best fixed arm in hindsight; ties go to the lowest index."""
    return int(np.argmin(np.asarray(losses, dtype=float).sum(axis=0)))


def to_csv(losses, path=None) -> str:
    """Header row of arm indices, then one row per round, full precision."""
    losses = np.asarray(losses, dtype=float)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(range(losses.shape[1]))
    for row in losses:
        w.writerow(repr(float(x)) for x in row)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def from_csv(source) -> np.ndarray:
    """Inverse of :func:`to_csv`; accepts a path or the CSV text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        source = Path(source).read_text()
    rows = list(csv.reader(io.StringIO(source)))
    if not rows:
        raise InvalidConfigError("empty loss CSV")
    header = [int(h) for h in rows[0]]
    if header != list(range(len(header))):
        raise InvalidConfigError(f"header must list arms 0..n-1, got {rows[0]}")
    data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
    if data.size == 0:
        return np.zeros((0, len(header)))
    if data.shape[1] != len(header):
        raise InvalidConfigError("row width does not match header")
    return data
