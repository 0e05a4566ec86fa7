"""Monte Carlo checks of the fixed-point limits.

Permutations are drawn by a batched Fisher-Yates shuffle and filtered by
rejection. Every run owns its generator, so equal :class:`RngSpec` values and
parameters give bit-identical summaries.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Union

import numpy as np

from .errors import RangeError, TooFewSamples
from .perm import Permutation
from .tables import DerangementSequence, derangements_up_to, e_count

E = math.e
INV_E = 1 / E
LARGEST_FP_LIMIT = 1 / (E - 1)
BETA_FRACTION_LIMIT = 1 - 2 / E

MIN_SAMPLES = 1000
CHUNK = 8192
# Poisson(1) tail beyond this is far below double precision.
POISSON_SUPPORT = 24

_BIT_GENERATORS = {
    "pcg64": np.random.PCG64,
    "philox": np.random.Philox,
    "sfc64": np.random.SFC64,
    "mt19937": np.random.MT19937,
}


@dataclass(frozen=True)
class RngSpec:
    seed: int
    algorithm: str = "pcg64"

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.algorithm not in _BIT_GENERATORS:
            raise ValueError(f"unknown generator {self.algorithm!r}; choose from {sorted(_BIT_GENERATORS)}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(_BIT_GENERATORS[self.algorithm](self.seed))


RngLike = Union[RngSpec, np.random.Generator]


def _gen(rng: RngLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngSpec) else rng


@dataclass(frozen=True)
class StatSummary:
    samples: int
    mean: float
    std_error: float
    target: float
    z_score: Optional[float]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    def to_text(self) -> str:
        z = "n/a" if self.z_score is None else f"{self.z_score:+.4f}"
        return (
            f"{'samples':<10}{self.samples:>16d}\n"
            f"{'mean':<10}{self.mean:>16.10f}\n"
            f"{'std_error':<10}{self.std_error:>16.10f}\n"
            f"{'target':<10}{self.target:>16.10f}\n"
            f"{'z_score':<10}{z:>16}\n"
        )


def summarize(values: np.ndarray, target: float) -> StatSummary:
    values = np.asarray(values, dtype=np.float64)
    m = values.size
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    z = (mean - target) / std_error if std_error > 0 else None
    return StatSummary(m, mean, std_error, float(target), z)


def shuffled_batch(gen: np.random.Generator, n: int, size: int) -> np.ndarray:
    """``size`` uniform permutations of [n] as rows of one-line images (values 1..n)."""
    dtype = np.int16 if n < 2**15 else np.int64
    a = np.tile(np.arange(1, n + 1, dtype=dtype), (size, 1))
    if n < 2:
        return a
    flat = a.ravel()
    base = np.arange(size) * n
    # column c holds the swap partner for position n-1-c, uniform on 0..n-1-c
    highs = np.arange(n, 1, -1)
    partners = gen.integers(0, highs, size=(size, n - 1))
    for c, i in enumerate(range(n - 1, 0, -1)):
        ii = base + i
        jj = base + partners[:, c]
        tmp = flat[ii]
        flat[ii] = flat[jj]
        flat[jj] = tmp
    return a


def _fixed_mask(batch: np.ndarray) -> np.ndarray:
    n = batch.shape[1]
    return batch == np.arange(1, n + 1, dtype=batch.dtype)


def sample_nonderangements(n: int, count: int, rng: RngLike) -> np.ndarray:
    """``count`` uniform non-derangements of [n], by rejecting derangements."""
    if n < 1:
        raise RangeError("n must be at least 1")
    gen = _gen(rng)
    kept: list[np.ndarray] = []
    have = 0
    while have < count:
        batch = shuffled_batch(gen, n, CHUNK)
        batch = batch[_fixed_mask(batch).any(axis=1)]
        kept.append(batch)
        have += len(batch)
    return np.concatenate(kept)[:count]


def sample_nonderangement(n: int, rng: RngLike) -> Permutation:
    """One uniform non-derangement of [n].

    Pass a :class:`numpy.random.Generator` to draw a stream; an
    :class:`RngSpec` always restarts from its seed.
    """
    if n < 1:
        raise RangeError("n must be at least 1")
    gen = _gen(rng)
    while True:
        row = shuffled_batch(gen, n, 1)[0]
        if (row == np.arange(1, n + 1)).any():
            return Permutation(tuple(int(v) for v in row))


def exact_expected_largest(n: int, d: Optional[DerangementSequence] = None) -> Fraction:
    """E[largest fixed point] over uniform non-derangements of [n]: d_{n+1}/(n! - d_n)."""
    if n < 1:
        raise RangeError("n must be at least 1")
    if d is None or d.max_n < n + 1:
        d = derangements_up_to(n + 1)
    return Fraction(d[n + 1], factorial(n) - d[n])


def largest_fixed_points(batch: np.ndarray) -> np.ndarray:
    mask = _fixed_mask(batch)
    n = batch.shape[1]
    return n - np.argmax(mask[:, ::-1], axis=1)


def estimate_largest_fp_mean(n: int, samples: int, rng: RngLike) -> StatSummary:
    """Mean of largest-fixed-point / n over uniform non-derangements of [n]."""
    if samples < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples")
    batch = sample_nonderangements(n, samples, rng)
    values = largest_fixed_points(batch) / n
    return summarize(values, float(exact_expected_largest(n) / n))


def exact_beta_fraction(n: int) -> Fraction:
    """|E_{n+1}| / (n+1)!: chance that a permutation of [n+1] has two or more fixed points."""
    return Fraction(e_count(n + 1), factorial(n + 1))


def estimate_beta_fraction(n: int, samples: int, rng: RngLike) -> StatSummary:
    """Fraction of uniform permutations of [n+1] with at least two fixed points."""
    if n < 1:
        raise RangeError("n must be at least 1")
    if samples < 1:
        raise TooFewSamples("need at least one sample")
    gen = _gen(rng)
    hits: list[np.ndarray] = []
    left = samples
    while left > 0:
        size = min(CHUNK, left)
        batch = shuffled_batch(gen, n + 1, size)
        hits.append(_fixed_mask(batch).sum(axis=1) >= 2)
        left -= size
    return summarize(np.concatenate(hits), float(exact_beta_fraction(n)))


def poisson1_cdf() -> np.ndarray:
    pmf = [INV_E / factorial(k) for k in range(POISSON_SUPPORT + 1)]
    return np.cumsum(pmf)


def poisson1_variates(gen: np.random.Generator, size: int) -> np.ndarray:
    """Poisson(1) draws by inverse CDF on the cumulative mass."""
    u = gen.random(size)
    return np.searchsorted(poisson1_cdf(), u, side="right")


def poisson_conditioned_max(samples: int, rng: RngLike, *, forced_k: Optional[int] = None) -> StatSummary:
    """Mean position of the last event of a rate-1 Poisson process on [0, 1],
    conditioned on at least one event.

    ``forced_k`` fixes the number of events instead of drawing it; the target
    is then k/(k+1).
    """
    if samples < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples")
    gen = _gen(rng)
    maxima: list[np.ndarray] = []
    have = 0
    while have < samples:
        if forced_k is None:
            k = poisson1_variates(gen, CHUNK)
            k = k[k >= 1]
        else:
            if forced_k < 1:
                raise RangeError("forced_k must be at least 1")
            k = np.full(CHUNK, forced_k)
        if not len(k):
            continue
        points = gen.random(int(k.sum()))
        starts = np.concatenate(([0], np.cumsum(k)[:-1]))
        maxima.append(np.maximum.reduceat(points, starts))
        have += len(k)
    values = np.concatenate(maxima)[:samples]
    target = LARGEST_FP_LIMIT if forced_k is None else forced_k / (forced_k + 1)
    return summarize(values, target)
