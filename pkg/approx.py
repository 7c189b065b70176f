"""
Asymptotic MSE formulas for the Good-Turing estimator

mse_thm1 plugs exact binomial occupancy moments into the first-moment
expression; mse_thm2 is the Poissonized version with e^(-n p_s) in place of
(1 - p_s)^n. Both drop an O(1/n^2) remainder and are meant for n >> 1, but
accept any n >= 2.
"""

import math

import numpy as np

from core import ValidationError
from exact import stable_pow1m


def expected_occupancy(dist, n, k):
    """E[N_k] for k in {1, 2} under multinomial sampling"""
    if k not in (1, 2):
        raise ValidationError(f"occupancy order k must be 1 or 2, got {k}")
    if int(n) != n or n < k:
        raise ValidationError(f"E[N_{k}] needs n >= {k}, got {n}")
    n = int(n)
    p = dist.probs
    if k == 1:
        return n * math.fsum(p * stable_pow1m(p, n - 1))
    return n * (n - 1) / 2 * math.fsum(p**2 * stable_pow1m(p, n - 2))


def mse_thm1(dist, n):
    if int(n) != n or n < 2:
        raise ValidationError(f"first-moment formula needs n >= 2, got {n}")
    e_n1 = expected_occupancy(dist, n, 1)
    e_n2 = expected_occupancy(dist, n, 2)
    return (2.0 * e_n2 / n + (e_n1 / n) * (1.0 - e_n1 / n)) / n


def mse_thm2(dist, n):
    """(n sum p^2 e^-np + sum p e^-np - (sum p e^-np)^2) / n"""
    if int(n) != n or n < 1:
        raise ValidationError(f"sample size n must be a positive integer, got {n}")
    p = dist.probs
    decay = np.exp(-n * p)
    first = math.fsum(p * decay)
    second = math.fsum(p**2 * decay)
    return (n * second + first - first**2) / n
