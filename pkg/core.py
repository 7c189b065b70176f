"""
Domain types and the estimator / missing-mass primitives

A distribution lives on the index alphabet 0..m-1. Zero entries are legal and
still count toward the alphabet size m.
"""

import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from config import Config
from errors import (  # noqa: F401  re-exported for callers
    DomainError,
    GTRiskError,
    OracleTooLargeError,
    SupportOverflowError,
    ValidationError,
)


def _frozen(values, dtype):
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Distribution:
    """Probability vector (p_s) on a finite alphabet"""
    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen(self.probs, np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise ValidationError("distribution must be a non-empty 1-D vector")
        bad = np.flatnonzero(~np.isfinite(probs) | (probs < 0))
        if bad.size:
            raise ValidationError(f"probability at index {bad[0]} is invalid: {probs[bad[0]]!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > Config.NORMALIZATION_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, 'probs', probs)

    @property
    def m(self):
        return int(self.probs.size)

    @property
    def support_size(self):
        return int(np.count_nonzero(self.probs))

    def __len__(self):
        return self.m

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())


@dataclass(frozen=True)
class Sample:
    """Observed frequencies f_s of a sample of size n"""
    counts: np.ndarray
    n: int

    def __post_init__(self):
        counts = _frozen(self.counts, np.int64)
        if counts.ndim != 1:
            raise ValidationError("counts must be a 1-D vector")
        negative = np.flatnonzero(counts < 0)
        if negative.size:
            raise ValidationError(f"count at index {negative[0]} is negative")
        if self.n < 1:
            raise ValidationError(f"sample size must be positive, got {self.n}")
        if int(counts.sum()) != self.n:
            raise ValidationError(f"counts sum to {int(counts.sum())}, expected n={self.n}")
        object.__setattr__(self, 'counts', counts)
        object.__setattr__(self, 'n', int(self.n))

    def __eq__(self, other):
        if not isinstance(other, Sample):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.counts, other.counts)

    def __hash__(self):
        return hash((self.n, self.counts.tobytes()))


@dataclass(frozen=True)
class OccupancyProfile:
    """N_k, the number of symbols seen exactly k times"""
    n_k: dict
    n: int
    n0: int = field(default=0)

    def __post_init__(self):
        if any(k < 1 or v < 0 for k, v in self.n_k.items()):
            raise ValidationError("occupancy keys must be >= 1 and counts >= 0")
        if sum(k * v for k, v in self.n_k.items()) != self.n:
            raise ValidationError("occupancy numbers do not add up to n")
        object.__setattr__(self, 'n_k', MappingProxyType(dict(sorted(self.n_k.items()))))

    def count(self, k):
        if k == 0:
            return self.n0
        return self.n_k.get(k, 0)


def build_distribution(weights):
    """Normalize non-negative weights into a Distribution"""
    try:
        weights = np.asarray(weights, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"weights are not numeric: {e}")
    if weights.ndim != 1 or weights.size == 0:
        raise ValidationError("weights must be a non-empty vector")
    for index, value in enumerate(weights):
        if not math.isfinite(value):
            raise ValidationError(f"weight at index {index} is not finite")
        if value < 0:
            raise ValidationError(f"weight at index {index} is negative: {value}")
    total = math.fsum(weights)
    if total <= 0:
        raise ValidationError("all-zero weight vector")
    return Distribution(weights / total)


def uniform(m):
    if m < 1:
        raise ValidationError(f"uniform needs m >= 1, got {m}")
    return Distribution(np.full(int(m), 1.0 / m))


def zipf(m, s):
    """p_i proportional to i^-s over ranks 1..m"""
    if m < 1:
        raise ValidationError(f"zipf needs m >= 1, got {m}")
    if not math.isfinite(s):
        raise ValidationError(f"zipf exponent must be finite, got {s}")
    ranks = np.arange(1, int(m) + 1, dtype=np.float64)
    return build_distribution(np.power(ranks, -float(s)))


def dirac_uniform(m_uniform, w):
    """Weight w spread over m_uniform symbols plus one atom of weight 1-w.

    With w == 1 the atom is dropped, so the support is exactly m_uniform.
    """
    if m_uniform < 1:
        raise ValidationError(f"m_uniform must be >= 1, got {m_uniform}")
    if not 0.0 <= w <= 1.0:
        raise ValidationError(f"mixture weight w must lie in [0, 1], got {w}")
    probs = np.full(int(m_uniform), w / m_uniform)
    if w < 1.0:
        probs = np.append(probs, 1.0 - w)
    return Distribution(probs)


def sample_from_counts(counts):
    counts = np.asarray(counts)
    for index, value in enumerate(counts):
        if value != int(value):
            raise ValidationError(f"count at index {index} is not an integer: {value}")
    counts = counts.astype(np.int64)
    return Sample(counts, int(counts.sum()))


def occupancy(sample):
    values, multiplicity = np.unique(sample.counts, return_counts=True)
    n_k = {int(k): int(c) for k, c in zip(values, multiplicity) if k > 0}
    n0 = int(multiplicity[values == 0].sum())
    return OccupancyProfile(n_k, sample.n, n0)


def good_turing(sample):
    """N_1 / n"""
    return int(np.count_nonzero(sample.counts == 1)) / sample.n


def missing_mass(dist, sample):
    """Total probability of the symbols the sample never hit"""
    if dist.m != sample.counts.size:
        raise ValidationError(
            f"distribution has {dist.m} symbols but sample has {sample.counts.size}")
    return float(math.fsum(dist.probs[sample.counts == 0]))
