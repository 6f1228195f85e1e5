"""Fisher information of the HOM dip and delay-estimation bounds."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, stats

from .core import SpectralModeConfig
from .homi import homi_probability_array

SINGULAR_WINDOW = 1e-5
FALLBACK_STEP = 1e-4
DEGENERATE_PQ = 1e-12


class NonIdentifiableError(ValueError):
    """The delay cannot be estimated because P is locally flat."""


class WindowTooNarrowWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class FisherCurve:
    tau_grid: np.ndarray
    fi_values: np.ndarray

    def __post_init__(self) -> None:
        fi = np.asarray(self.fi_values, dtype=float)
        if not np.all(np.isfinite(fi)) or np.any(fi < 0):
            raise ValueError("Fisher information must be finite and non-negative")


@dataclass(frozen=True)
class CrlbReport:
    true_tau: float
    num_trials: int
    num_measurements_per_trial: int
    estimator_sd: float
    crlb_sd: float
    estimator_mean: float

    @property
    def efficiency_ratio(self) -> float:
        return self.estimator_sd / self.crlb_sd


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    n_values: tuple
    sqrt_fi_max: tuple

    def relative_residuals(self) -> np.ndarray:
        n = np.asarray(self.n_values, dtype=float)
        fitted = self.slope * n + self.intercept
        return np.abs(np.asarray(self.sqrt_fi_max) - fitted) / np.abs(fitted)


def _derivative(p_of_tau: Callable, tau: float, step: float) -> float:
    # central differences at h and h/2, Richardson-combined to O(h^4)
    def central(h):
        return (p_of_tau(tau + h) - p_of_tau(tau - h)) / (2 * h)

    return (4 * central(step / 2) - central(step)) / 3


def _fi_at(p_of_tau: Callable, tau: float, step: float) -> float:
    p = p_of_tau(tau)
    d = _derivative(p_of_tau, tau, step)
    return d * d / (p * (1 - p))


def fisher_numeric(p_of_tau: Callable, tau: float, step: float = FALLBACK_STEP, full_output: bool = False):
    """Fisher information ``P'^2 / (P (1 - P))`` of a binary outcome.

    ``P'`` comes from Richardson-extrapolated central differences.  Where
    ``P (1 - P) < 1e-12`` the point is degenerate (a perfect dip or peak);
    the value returned there is the limit approached from ``tau + delta``,
    extrapolated quadratically from delta = 8, 16, 24 steps.

    With ``full_output`` a ``(fi, degenerate)`` pair is returned.
    """
    if not step > 0:
        raise ValueError("step must be > 0")

    def p(t):
        return float(p_of_tau(t))

    tau = float(tau)
    p0 = p(tau)
    degenerate = p0 * (1 - p0) < DEGENERATE_PQ
    if degenerate:
        f1, f2, f3 = (_fi_at(p, tau + k * 8 * step, step) for k in (1, 2, 3))
        fi = max(3 * f1 - 3 * f2 + f3, 0.0)
    else:
        fi = _fi_at(p, tau, step)
    return (fi, degenerate) if full_output else fi


def _closed_form(config: SpectralModeConfig, tau: np.ndarray) -> np.ndarray:
    n = config.n_modes
    a = config.mode_spacing
    g2 = config.mode_width ** 2
    x = 2 * a * tau
    s, c = np.sin(x), np.cos(x)
    sn, cn = np.sin(n * x), np.cos(n * x)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        numer = (g2 * tau / 2) * sn - 2 * a * n * cn + 2 * a * sn * c / s
        denom = n * n * np.exp(g2 * tau * tau / 2) * s * s - sn * sn
        fi = numer * numer / denom
    # past the envelope both terms underflow or overflow; the limit is 0
    fi = np.where(np.isinf(denom), 0.0, fi)
    return fi


def fisher_closed_form(config: SpectralModeConfig, tau):
    """Fisher information of the HOM coincidence curve in ps^-2.

    Uses the analytic expression in terms of ``sin(2 alpha N tau)`` and
    ``sin(2 alpha tau)``.  Within 1e-5 of its removable singularities
    (``tau = 0`` and ``sin(2 alpha tau) = 0``) it falls back to
    :func:`fisher_numeric` on the closed-form probability.
    """
    t = np.asarray(tau, dtype=float)
    flat = np.atleast_1d(t).astype(float)
    out = _closed_form(config, flat)
    near = (np.abs(np.sin(2 * config.mode_spacing * flat)) < SINGULAR_WINDOW) | (
        np.abs(flat) < SINGULAR_WINDOW
    )
    if np.any(near):

        def p(tt):
            return float(homi_probability_array(config, np.array([tt]))[0])

        for i in np.flatnonzero(near):
            out[i] = fisher_numeric(p, flat[i], FALLBACK_STEP)
    out = np.maximum(out, 0.0)
    return float(out[0]) if t.ndim == 0 else out


def fisher_curve(config: SpectralModeConfig, tau_min=-1.5, tau_max=1.5, n_samples=3001) -> FisherCurve:
    tau = np.linspace(tau_min, tau_max, int(n_samples))
    return FisherCurve(tau, fisher_closed_form(config, tau))


def dip_limit(config: SpectralModeConfig) -> float:
    """Limit of the Fisher information at the bottom of the dip, tau -> 0.

    Near the dip ``P ~ c tau^2`` with ``c = (gamma^2/4 + 4 alpha^2 (N^2-1)/6) / 2``,
    so FI -> 4c.
    """
    return config.mode_width ** 2 / 2 + 4 * config.mode_spacing ** 2 * (config.n_modes ** 2 - 1) / 3


def default_search_window(config: SpectralModeConfig) -> tuple[float, float]:
    return 0.0, 3 / config.mode_width + math.pi / (2 * config.mode_spacing)


def max_fisher(
    config: SpectralModeConfig,
    search_window: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Global maximum of the Fisher information over ``search_window`` (ps).

    Dense scan with step ``pi / (40 N alpha)`` followed by golden-section
    refinement of the best bracket.  FI is even in tau, so a maximum at
    ``tau = 0`` is interior even when 0 is the window edge; any other edge
    maximum raises :class:`WindowTooNarrowWarning`.
    """
    lo, hi = default_search_window(config) if search_window is None else map(float, search_window)
    if not lo < hi:
        raise ValueError("search window must have lo < hi")
    step = math.pi / (40 * config.n_modes * config.mode_spacing)
    n = max(3, math.ceil((hi - lo) / step) + 1)
    grid = np.linspace(lo, hi, n)
    fi = fisher_closed_form(config, grid)
    i = int(np.argmax(fi))
    if i in (0, n - 1):
        if grid[i] != 0.0:
            warnings.warn(
                f"Fisher maximum sits on the search-window edge tau={grid[i]:.4g}",
                WindowTooNarrowWarning,
                stacklevel=2,
            )
        return float(grid[i]), float(fi[i])

    def neg(t):
        return -fisher_closed_form(config, t)

    res = optimize.minimize_scalar(
        neg, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden", options={"xtol": 1e-10}
    )
    if -res.fun >= fi[i]:
        return float(res.x), float(-res.fun)
    return float(grid[i]), float(fi[i])


def sqrt_fi_vs_n_fit(alpha: float, gamma: float, n_range: Sequence[int] = range(1, 41)) -> LinearFit:
    """Least-squares line through ``sqrt(max FI)`` against the mode number."""
    ns = [int(n) for n in n_range]
    if len(ns) < 2:
        raise ValueError("need at least two mode numbers for a linear fit")
    if min(ns) < 1 or max(ns) > 40:
        raise ValueError("mode numbers must lie in 1..40")
    roots = [math.sqrt(max_fisher(SpectralModeConfig(n, alpha, gamma))[1]) for n in ns]
    fit = stats.linregress(ns, roots)
    return LinearFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        n_values=tuple(ns),
        sqrt_fi_max=tuple(roots),
    )


def _dp(config: SpectralModeConfig, t: float, h: float = 1e-6) -> float:
    p = homi_probability_array(config, np.array([t - h, t + h]))
    return (p[1] - p[0]) / (2 * h)


def monotone_branch(config: SpectralModeConfig, tau: float) -> tuple[float, float]:
    """Interval between the stationary points of P nearest to ``tau``.

    Search stops ``8 / gamma`` ps beyond ``tau`` on either side if no
    stationary point is met (P flattens towards 1/2 there).
    """
    reach = 8 / config.mode_width
    step = math.pi / (200 * config.n_modes * config.mode_spacing)

    def scan(direction: int) -> float:
        edge = tau + direction * reach
        # P is even, so tau = 0 is always stationary
        if tau * edge < 0:
            edge = 0.0
        grid = np.append(np.arange(tau, edge, direction * step), edge)
        slopes = np.array([_dp(config, g) for g in grid])
        sign0 = np.sign(slopes[0])
        for j in range(1, grid.size):
            if np.sign(slopes[j]) != sign0:
                return float(optimize.brentq(lambda t: _dp(config, t), grid[j - 1], grid[j]))
        return float(edge)

    return scan(-1), scan(+1)


def crlb_monte_carlo(
    config: SpectralModeConfig,
    true_tau: float,
    num_measurements: int,
    num_trials: int,
    seed: int | None = None,
) -> CrlbReport:
    """Simulate delay estimation from binary coincidence outcomes.

    Each trial draws ``num_measurements`` Bernoulli outcomes with success
    probability ``P(true_tau)`` (through their binomial count) and estimates
    the delay by maximum likelihood restricted to the monotone branch of P
    containing ``true_tau``.  The empirical spread is reported next to the
    Cramer-Rao bound ``1 / sqrt(Num * FI)``.
    """
    true_tau = float(true_tau)
    if num_measurements < 1 or num_trials < 2:
        raise ValueError("need num_measurements >= 1 and num_trials >= 2")
    p_true = float(homi_probability_array(config, np.array([true_tau]))[0])
    if not 0 < p_true < 1:
        raise ValueError(f"P(true_tau) = {p_true} must lie strictly inside (0, 1)")
    fi = fisher_closed_form(config, true_tau)
    if fi < 1e-9:
        raise NonIdentifiableError(f"FI({true_tau}) = {fi:.3g}: P is locally flat")
    lo, hi = monotone_branch(config, true_tau)
    p_lo, p_hi = homi_probability_array(config, np.array([lo, hi]))

    rng = np.random.default_rng(seed)
    counts = rng.binomial(num_measurements, p_true, size=num_trials)
    estimates = np.empty(num_trials)
    for k in np.unique(counts):
        target = k / num_measurements
        estimates[counts == k] = _invert(config, target, lo, hi, p_lo, p_hi)
    return CrlbReport(
        true_tau=true_tau,
        num_trials=int(num_trials),
        num_measurements_per_trial=int(num_measurements),
        estimator_sd=float(np.std(estimates, ddof=1)),
        crlb_sd=float(1 / math.sqrt(num_measurements * fi)),
        estimator_mean=float(np.mean(estimates)),
    )


def _invert(config, target, lo, hi, p_lo, p_hi) -> float:
    # the likelihood is unimodal in P, so the estimate is P^-1(k/Num) clipped to the branch
    if (target - p_lo) * (target - p_hi) >= 0:
        return lo if abs(target - p_lo) <= abs(target - p_hi) else hi
    return float(
        optimize.brentq(
            lambda t: homi_probability_array(config, np.array([t]))[0] - target, lo, hi, xtol=1e-14
        )
    )
