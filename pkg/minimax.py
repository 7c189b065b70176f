"""
Worst-case MSE of the Good-Turing estimator over alphabets of size m

The maximal MSE is alpha/n + O(1/n^2), where alpha maximizes

    alpha(w, c) = w (1 + c) e^-c - (w e^-c)^2
    s.t. 0 <= w <= 1,  w <= (m/n) c.

The optimum sits on one of two boundaries. For m/n >= 1/W(2) it is the
plateau w = 1, c = W(2) with alpha = (W(2)^2 + 2 W(2)) / 4. Below that the
constraint w = (m/n) c binds and alpha is a one-dimensional maximum over
c in [0, n/m], bracketed by a derivative-sign scan and refined by golden
section.

The maximizing distribution is uniform on max(floor(w n / c - 1), 1) symbols
with total weight w, plus one atom of weight 1 - w. On the constrained
boundary w n / c is m, so that count is m - 1.
"""

import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from config import Config
from core import DomainError, SupportOverflowError, ValidationError, dirac_uniform
from workers import ordered_map

logger = logging.getLogger(__name__)

_INV_E = math.exp(-1.0)
# w e^w and (w + 1) e^w stay finite below this
_LOG_FORM_X = 1e100
INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2


class Regime(enum.Enum):
    PLATEAU = 'Plateau'
    CONSTRAINED = 'Constrained'


@dataclass(frozen=True)
class WorstCaseSolution:
    alpha: float
    w: float
    c: float
    regime: Regime
    uniform_support: int
    mse_leading: float
    m: float
    n: int

    @property
    def atom_weight(self):
        return 1.0 - self.w

    @property
    def total_support(self):
        return self.uniform_support + (1 if self.w < 1.0 else 0)


# Special functions

def lambert_w0(x):
    """Principal branch of the Lambert W function for real x >= -1/e.

    Halley iteration; the start is a branch-point series for x < -0.25,
    log(x) - log(log(x)) for x > e and log1p(x) otherwise. Above
    _LOG_FORM_X the iteration runs on w + log(w) = log(x) so that w e^w
    never overflows.
    """
    x = float(x)
    if math.isnan(x) or math.isinf(x) or x < -_INV_E:
        raise DomainError(f"lambert_w0 is defined for finite x >= -1/e, got {x}")
    if x == -_INV_E:
        return -1.0
    if x == 0.0:
        return 0.0
    if x > _LOG_FORM_X:
        return _lambert_w0_log_form(math.log(x))

    if x < -0.25:
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    elif x > math.e:
        log_x = math.log(x)
        w = log_x - math.log(log_x)
    else:
        w = math.log1p(x)

    for _ in range(50):
        ew = math.exp(w)
        residual = w * ew - x
        if residual == 0.0:
            break
        w1 = w + 1.0
        if w1 == 0.0:
            break
        dw = residual / (ew * w1 - (w + 2.0) * residual / (2.0 * w1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def _lambert_w0_log_form(log_x):
    """Newton on f(w) = w + log(w) - log(x), for large x"""
    w = log_x - math.log(log_x)
    for _ in range(50):
        dw = (w + math.log(w) - log_x) / (1.0 + 1.0 / w)
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


@lru_cache(maxsize=None)
def w_of_two():
    return lambert_w0(2.0)


def plateau_alpha():
    """(W(2)^2 + 2 W(2)) / 4"""
    w2 = w_of_two()
    return (w2 * w2 + 2.0 * w2) / 4.0


def transition_ratio():
    """m/n at which the maximizer turns pure uniform"""
    return 1.0 / w_of_two()


def objective_alpha(w, c):
    value = w * (1.0 + c) * np.exp(-c) - (w * np.exp(-c)) ** 2
    return float(value) if np.ndim(value) == 0 else value


def _constrained_objective(c, ratio):
    return objective_alpha(ratio * c, c)


def _constrained_slope(c, ratio):
    decay = np.exp(-c)
    return ratio * (1.0 + c - c * c) * decay - 2.0 * ratio**2 * c * (1.0 - c) * decay**2


# One-dimensional search

def golden_section_max(f, lo, hi, tol=None):
    """Golden-section search for the maximum of a unimodal f on [lo, hi]"""
    if tol is None:
        tol = Config.GOLDEN_TOL
    if not tol > 0:
        raise ValidationError(f"golden-section tolerance must be positive, got {tol}")
    lo, hi = min(lo, hi), max(lo, hi)
    h = hi - lo
    if h <= tol:
        x = 0.5 * (lo + hi)
        return x, f(x)

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = lo + INV_PHI_SQUARE * h
    d = lo + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(steps - 1):
        h *= INV_PHI
        if yc > yd:
            hi = d
            d, yd = c, yc
            c = lo + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            lo = c
            c, yc = d, yd
            d = lo + INV_PHI * h
            yd = f(d)
    return (c, yc) if yc > yd else (d, yd)


def _maximize_constrained(ratio):
    c_hi = 1.0 / ratio
    grid = np.linspace(0.0, c_hi, Config.SCAN_POINTS)
    slope = _constrained_slope(grid, ratio)
    peaks = np.flatnonzero((slope[:-1] > 0) & (slope[1:] <= 0))
    logger.debug("ratio=%.6g: %d bracket(s) on [0, %.6g]", ratio, peaks.size, c_hi)

    def objective(c):
        return _constrained_objective(c, ratio)

    candidates = [(0.0, objective(0.0)), (c_hi, objective(c_hi))]
    for i in peaks:
        candidates.append(golden_section_max(objective, grid[i], grid[i + 1]))
    return max(candidates, key=lambda item: item[1])


# Worst case

def _check_alphabet(m, n):
    if int(n) != n or n < 2:
        raise ValidationError(f"worst case needs an integer n >= 2, got {n}")
    if m is None or (isinstance(m, str) and m.lower() in ('inf', 'infinity')):
        m = math.inf
    try:
        m = float(m)
    except (TypeError, ValueError):
        raise ValidationError(f"alphabet size m must be an integer >= 2 or inf, got {m!r}")
    if math.isnan(m) or m < 2 or (not math.isinf(m) and m != int(m)):
        raise ValidationError(f"alphabet size m must be an integer >= 2 or inf, got {m}")
    return m, int(n)


def _support_for(w, c, n):
    if c <= 0:
        return 1
    return max(int(math.floor(w * n / c - 1.0)), 1)


def _constrained_support(m):
    # w = (m/n) c on this boundary, so w n / c is m exactly
    return max(int(m) - 1, 1)


def solve_worst_case(m, n):
    m, n = _check_alphabet(m, n)
    ratio = m / n

    if math.isinf(m) or ratio >= transition_ratio() - 1e-12:
        regime = Regime.PLATEAU
        w, c = 1.0, w_of_two()
        alpha = objective_alpha(w, c)
        support = _support_for(w, c, n)
    else:
        regime = Regime.CONSTRAINED
        c, alpha = _maximize_constrained(ratio)
        w = min(ratio * c, 1.0)
        support = _constrained_support(m)

    logger.debug("m=%s n=%d: %s alpha=%.12g w=%.12g c=%.12g", m, n, regime.value, alpha, w, c)
    return WorstCaseSolution(
        alpha=alpha,
        w=w,
        c=c,
        regime=regime,
        uniform_support=support,
        mse_leading=alpha / n,
        m=m,
        n=n,
    )


def worst_case_distribution(m, n, solution=None):
    """The Dirac-uniform mixture that attains the worst case"""
    if solution is None:
        solution = solve_worst_case(m, n)
    dist = dirac_uniform(solution.uniform_support, solution.w)
    if dist.m > solution.m:
        logger.warning(
            "support formula needs %d symbols but m=%s (w=%.12g, c=%.12g)",
            dist.m, solution.m, solution.w, solution.c)
        raise SupportOverflowError(
            f"extremal distribution needs {dist.m} symbols, alphabet has {int(solution.m)}")
    return dist


def phase_curve(ratios, n_ref=None, threads=None):
    """(b, alpha) with m = round(b * n_ref), in input order"""
    if n_ref is None:
        n_ref = Config.DEFAULT_N_REF
    if int(n_ref) != n_ref or n_ref < 2:
        raise ValidationError(f"n_ref must be an integer >= 2, got {n_ref}")
    ratios = [float(b) for b in ratios]
    for index, b in enumerate(ratios):
        if not math.isfinite(b) or b <= 0:
            raise ValidationError(f"ratio at index {index} must be positive and finite, got {b}")
        if round(b * n_ref) < 2:
            raise ValidationError(
                f"ratio {b} gives m = {round(b * n_ref)} at n_ref={n_ref}; m must be >= 2")

    def point(b):
        return b, solve_worst_case(round(b * n_ref), n_ref).alpha

    return ordered_map(point, ratios, threads)


def alpha_landscape(ratio, c_max=5.0, points=50):
    """alpha(w, c) on a points x points grid of [0, c_max] x [0, 1].

    Returns c, w, alpha, feasible as flat arrays plus the constraint path
    w = min(ratio * c, 1) along the c axis.
    """
    if not ratio > 0 or not c_max > 0 or points < 2:
        raise ValidationError("landscape needs ratio > 0, c_max > 0 and points >= 2")
    c_axis = np.linspace(0.0, c_max, points)
    cc, ww = np.meshgrid(c_axis, np.linspace(0.0, 1.0, points), indexing='ij')
    surface = {
        'c': cc.ravel(),
        'w': ww.ravel(),
        'alpha': objective_alpha(ww, cc).ravel(),
        'feasible': (ww <= ratio * cc).ravel(),
    }
    path_w = np.minimum(ratio * c_axis, 1.0)
    path = {'c': c_axis, 'w': path_w, 'alpha': objective_alpha(path_w, c_axis)}
    return surface, path


# Auxiliary lemmas

def exp_quad(u, b):
    """g(u) = (u^2 + b u) e^-u"""
    return (u * u + b * u) * np.exp(-u)


def exp_quad_curve(b, u_max=7.0, points=100):
    if not u_max > 0 or points < 2:
        raise ValidationError("curve needs u_max > 0 and points >= 2")
    u = np.linspace(0.0, u_max, points)
    return u, exp_quad(u, b)


def exp_quad_extremes(b):
    root = math.sqrt(b * b + 4.0)
    upper = (2.0 - b + root) / 2.0
    if b >= 0:
        return [upper]
    return sorted(u for u in ((2.0 - b - root) / 2.0, upper) if u > 0)


def exp_quad_inflections(b):
    root = math.sqrt(b * b + 8.0)
    upper = (4.0 - b + root) / 2.0
    if b >= 1:
        return [upper]
    return sorted(u for u in ((4.0 - b - root) / 2.0, upper) if u > 0)


def central_derivative(f, x, order=1, h=None):
    if order == 1:
        h = 1e-5 if h is None else h
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if order == 2:
        h = 1e-4 if h is None else h
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    raise ValidationError(f"only first and second differences are supported, got {order}")


def beta_mode(a, b):
    """argmax of x^a (1 - x)^b on [0, 1]"""
    if not (a > 0 and b > 0):
        raise ValidationError(f"beta mode needs a > 0 and b > 0, got a={a}, b={b}")
    return a / (a + b)
