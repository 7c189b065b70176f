"""
Exact (non-asymptotic) MSE of the Good-Turing estimator

The moments are closed-form multinomial sums over single symbols and ordered
pairs s != s'. The pairwise sums cost O(m^2) and are evaluated in fixed row
blocks; block partial sums are combined with math.fsum, so the result does not
depend on how many threads ran the blocks.

brute_force_mse is the independent oracle: it walks every one of the m^n
sequences.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlog1py

from config import Config
from core import OracleTooLargeError, ValidationError
from workers import ordered_map

logger = logging.getLogger(__name__)

# (1 - x)^k is exactly 0 past this point for k > 0
_ONE_MINUS = 1.0 - 1e-15


@dataclass(frozen=True)
class MseReport:
    mse: float
    e_gt_sq: float
    e_cross: float
    e_mm_sq: float


def stable_pow1m(x, k):
    """(1 - x)^k for x in [0, 1], evaluated as exp(k * log1p(-x))"""
    x = np.asarray(x, dtype=np.float64)
    if k == 0:
        return np.ones_like(x)
    saturated = x >= _ONE_MINUS
    clipped = np.where(saturated, 0.0, x)
    return np.where(saturated, 0.0, np.exp(xlog1py(k, -clipped)))


def _check_n(n, minimum=1):
    if int(n) != n or n < minimum:
        raise ValidationError(f"sample size n must be an integer >= {minimum}, got {n}")
    return int(n)


def _pair_sums(probs, exponents, threads=None):
    """For each k in exponents, sum over s != s' of p_s p_s' (1 - p_s - p_s')^k"""
    m = probs.size
    if m > Config.EXACT_WARN_M:
        logger.warning("pairwise sums over m=%d symbols: O(m^2) work", m)
    block = Config.EXACT_BLOCK
    starts = range(0, m, block)

    def run(start):
        rows = probs[start:start + block]
        weight = rows[:, None] * probs[None, :]
        total = rows[:, None] + probs[None, :]
        # drop the diagonal s == s'
        idx = np.arange(rows.size)
        weight[idx, start + idx] = 0.0
        return [float(np.sum(weight * stable_pow1m(total, k))) for k in exponents]

    partials = ordered_map(run, starts, threads)
    return [math.fsum(part[i] for part in partials) for i in range(len(exponents))]


def expected_n1_squared(dist, n, threads=None):
    """E[N_1^2] = sum_s P(f_s=1) + sum_{s!=s'} n(n-1) p_s p_s' (1-p_s-p_s')^(n-2)"""
    n = _check_n(n)
    p = dist.probs
    single = math.fsum(n * p * stable_pow1m(p, n - 1))
    if n < 2:
        return single
    (pairs,) = _pair_sums(p, [n - 2], threads)
    return single + n * (n - 1) * pairs


def exact_mse(dist, n, threads=None):
    """Exact E[(M_hat - M_0)^2] with its three cross-term components.

    Cost is O(m^2); above roughly 10^4 symbols this gets slow.
    """
    n = _check_n(n)
    p = dist.probs
    exponents = [n - 1, n] if n < 2 else [n - 2, n - 1, n]
    sums = dict(zip(exponents, _pair_sums(p, exponents, threads)))

    single_n1 = math.fsum(n * p * stable_pow1m(p, n - 1))
    e_n1_sq = single_n1 + (n * (n - 1) * sums[n - 2] if n >= 2 else 0.0)
    e_gt_sq = e_n1_sq / n**2
    e_cross = sums[n - 1]
    e_mm_sq = math.fsum(p**2 * stable_pow1m(p, n)) + sums[n]

    mse = math.fsum([e_gt_sq, -2.0 * e_cross, e_mm_sq])
    return MseReport(mse=max(mse, 0.0), e_gt_sq=e_gt_sq, e_cross=e_cross, e_mm_sq=e_mm_sq)


def brute_force_mse(dist, n, chunk=4096):
    """Sum prob * (M_hat - M_0)^2 over all m^n sequences"""
    n = _check_n(n)
    p = dist.probs
    m = p.size
    if m**n > Config.ORACLE_LIMIT:
        raise OracleTooLargeError(
            f"instance too large for oracle: m^n = {m}^{n} exceeds {Config.ORACLE_LIMIT}")
    total = m**n
    logger.debug("enumerating %d sequences", total)
    partials = []
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total))
        # base-m digits of the sequence id, most significant first
        seqs = (ids[:, None] // m ** np.arange(n - 1, -1, -1)[None, :]) % m
        prob = np.prod(p[seqs], axis=1)
        counts = np.stack([(seqs == s).sum(axis=1) for s in range(m)], axis=1)
        estimate = (counts == 1).sum(axis=1) / n
        missing = ((counts == 0) * p[None, :]).sum(axis=1)
        partials.append(float(np.sum(prob * (estimate - missing) ** 2)))
    return math.fsum(partials)


def mse_occupancy_exact(dist, n, threads=None):
    """E[2N_2/n + (N_1/n)(1 - N_1/n)] / n with exact occupancy moments"""
    n = _check_n(n, minimum=2)
    p = dist.probs
    e_n1 = math.fsum(n * p * stable_pow1m(p, n - 1))
    e_n2 = n * (n - 1) / 2 * math.fsum(p**2 * stable_pow1m(p, n - 2))
    e_n1_sq = expected_n1_squared(dist, n, threads)
    return (2.0 * e_n2 / n + e_n1 / n - e_n1_sq / n**2) / n

