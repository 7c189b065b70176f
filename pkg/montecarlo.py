"""
Seeded simulation of the sampling experiment

Every trial draws from its own Philox stream keyed by
SeedSequence(seed, spawn_key=(trial,)). Squared errors are stored by trial
index and reduced in that order, so the estimate is bit-identical for any
thread count.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core import Sample, ValidationError, good_turing, missing_mass
from workers import ordered_map

logger = logging.getLogger(__name__)

_SEED_MAX = 2**64 - 1
_TRIAL_BLOCK = 1024


@dataclass(frozen=True)
class McResult:
    mse_estimate: float
    std_error: float
    trials: int
    seed: int


def derive_stream(seed, trial):
    """Independent generator for one trial of a seeded run"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_once(dist, n, stream, cdf=None):
    """Multinomial(n, dist) counts via inverse-CDF categorical draws"""
    if int(n) != n or n < 1:
        raise ValidationError(f"sample size n must be a positive integer, got {n}")
    if cdf is None:
        cdf = np.cumsum(dist.probs)
    draws = np.searchsorted(cdf, stream.random(int(n)) * cdf[-1], side='right')
    # guards u * cdf[-1] landing exactly on the last edge
    draws = np.minimum(draws, dist.m - 1)
    return Sample(np.bincount(draws, minlength=dist.m), int(n))


def _check_seed(seed):
    if int(seed) != seed or not 0 <= seed <= _SEED_MAX:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)


def monte_carlo_mse(dist, n, trials, seed, threads=None):
    if int(trials) != trials or trials < 2:
        raise ValidationError(f"need at least 2 trials for a standard error, got {trials}")
    if int(n) != n or n < 1:
        raise ValidationError(f"sample size n must be a positive integer, got {n}")
    seed = _check_seed(seed)
    trials, n = int(trials), int(n)
    cdf = np.cumsum(dist.probs)

    def run(start):
        stop = min(start + _TRIAL_BLOCK, trials)
        errors = np.empty(stop - start)
        for offset, trial in enumerate(range(start, stop)):
            sample = sample_once(dist, n, derive_stream(seed, trial), cdf)
            errors[offset] = (good_turing(sample) - missing_mass(dist, sample)) ** 2
        return errors

    logger.debug("simulating %d trials of n=%d over m=%d symbols", trials, n, dist.m)
    errors = np.concatenate(ordered_map(run, range(0, trials, _TRIAL_BLOCK), threads))
    estimate = float(np.mean(errors))
    std_error = float(np.std(errors, ddof=1)) / math.sqrt(trials)
    return McResult(mse_estimate=estimate, std_error=std_error, trials=trials, seed=seed)
