"""Closed-form multi-mode Hong-Ou-Mandel coincidence probability."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Family, PatternCurve, SpectralModeConfig, details_factor, local_extrema

DEFAULT_TAU_WINDOW = (-1.5, 1.5)
DEFAULT_SAMPLES = 3001


class GridTooCoarseError(ValueError):
    """The frequency sampling cannot resolve the requested delays."""


@dataclass(frozen=True)
class HomiResult:
    probability: float
    envelope: float
    details: float


def envelope(config: SpectralModeConfig, tau):
    """Single-mode envelope ``exp(-gamma^2 tau^2 / 4) / N``."""
    tau = np.asarray(tau, dtype=float)
    return np.exp(-(config.mode_width * tau) ** 2 / 4) / config.n_modes


def _probability(config: SpectralModeConfig, tau: np.ndarray) -> np.ndarray:
    # 1 - E*D/N rewritten as (1 - E) + E*(2/N)*sum sin^2(s x / 2) so the dip
    # bottom does not cancel catastrophically.
    n = config.n_modes
    x = 2 * config.mode_spacing * tau
    e = np.exp(-(config.mode_width * tau) ** 2 / 4)
    spread = np.zeros_like(x)
    for k in range(1, n + 1):
        spread += np.sin((2 * k - n - 1) * x / 2) ** 2
    one_minus = -np.expm1(-(config.mode_width * tau) ** 2 / 4) + e * 2 * spread / n
    return np.clip(0.5 * one_minus, 0.0, 1.0)


def homi_probability(config: SpectralModeConfig, tau: float) -> HomiResult:
    """Coincidence probability at delay ``tau`` (ps).

    P = 1/2 [1 - P0 * D_N(2 alpha tau)] with P0 = exp(-gamma^2 tau^2/4)/N.
    Exact only when the modes do not overlap; see :func:`cross_term_bound`.
    """
    tau = float(tau)
    p = float(_probability(config, np.array([tau]))[0])
    return HomiResult(
        probability=p,
        envelope=float(envelope(config, tau)),
        details=details_factor(config.n_modes, 2 * config.mode_spacing * tau),
    )


def homi_probability_array(config: SpectralModeConfig, tau) -> np.ndarray:
    """Vectorised coincidence probability."""
    return _probability(config, np.asarray(tau, dtype=float))


def cross_term_bound(config: SpectralModeConfig) -> float:
    """Weight of the neglected mode-overlap terms relative to the mode terms.

    For neighbouring Gaussian modes ``2 alpha`` apart on both axes the overlap
    integral is ``exp(-4 alpha^2 / gamma^2)``; the closed form is accurate to
    roughly this fraction of the fringe amplitude.
    """
    if config.n_modes == 1:
        return 0.0
    return math.exp(-4 * config.mode_spacing ** 2 / config.mode_width ** 2)


def homi_pattern(
    config: SpectralModeConfig,
    tau_min: float = DEFAULT_TAU_WINDOW[0],
    tau_max: float = DEFAULT_TAU_WINDOW[1],
    n_samples: int = DEFAULT_SAMPLES,
) -> PatternCurve:
    if not tau_min < tau_max:
        raise ValueError("tau_min must be < tau_max")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    tau = np.linspace(tau_min, tau_max, int(n_samples))
    return PatternCurve(
        abscissa=tau,
        values=homi_probability_array(config, tau),
        family=Family.HOMI,
        config_snapshot=config,
        metadata={"cross_term_bound": cross_term_bound(config)},
    )


def homi_envelope_via_fourier(projection, omega_minus, tau_grid) -> np.ndarray:
    """Real part of the Fourier transform of a difference-frequency distribution.

    ``projection`` is sampled on the uniform grid ``omega_minus`` and must have
    decayed (below 1e-8 of its peak) at both ends.  The transform is evaluated
    directly at each requested delay with trapezoid weights.  Fed a single
    mode's projection this returns the envelope ``P0``; fed the full multi-mode
    projection it returns ``1 - 2 P(tau)``.
    """
    f = np.asarray(projection, dtype=float)
    w = np.asarray(omega_minus, dtype=float)
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if f.shape != w.shape or f.ndim != 1 or f.size < 2:
        raise ValueError("projection and omega_minus must be matching 1-D arrays")
    dw = np.diff(w)
    step = dw.mean()
    if not np.all(dw > 0) or np.max(np.abs(dw - step)) > 1e-9 * abs(step):
        raise ValueError("omega_minus must be uniform and increasing")
    peak = np.max(np.abs(f))
    if peak > 0 and max(abs(f[0]), abs(f[-1])) > 1e-8 * peak:
        raise ValueError("projection has not decayed at the grid edges")
    # the sampled transform is periodic in tau with period 2 pi / step
    limit = math.pi / step
    if tau.size and np.max(np.abs(tau)) >= limit:
        raise GridTooCoarseError(
            f"|tau| up to {np.max(np.abs(tau)):.4g} ps needs omega step < "
            f"{math.pi / np.max(np.abs(tau)):.4g}, got {step:.4g}"
        )
    weights = np.full(w.size, step)
    weights[0] = weights[-1] = step / 2
    return np.cos(np.outer(tau, w)) @ (f * weights)


def primary_valley_mask(config: SpectralModeConfig, tau) -> np.ndarray:
    """True where ``tau`` is close to a primary valley.

    Primary valleys sit near ``D_N(2 alpha tau) = +N``: every multiple of pi
    in ``x`` for odd N and every even multiple for even N.  The envelope pulls
    the sampled minimum slightly off ``m*pi``, so anything within ``pi/(2N)``
    (half way to the first zero of the details factor) counts.
    """
    tau = np.asarray(tau, dtype=float)
    x = 2 * config.mode_spacing * tau
    m = np.rint(x / math.pi)
    period_ok = (m * (config.n_modes - 1)) % 2 == 0
    return period_ok & (np.abs(x - m * math.pi) < math.pi / (2 * config.n_modes))


def secondary_valley_counts(curve: PatternCurve, prominence: float = 1e-6) -> list[int]:
    """Number of secondary valleys inside each complete primary-valley interval."""
    config = curve.config_snapshot
    tau = curve.abscissa
    minima = local_extrema(curve.values, "min", prominence)
    primary = minima[primary_valley_mask(config, tau[minima])]
    secondary = np.setdiff1d(minima, primary)
    return [
        int(np.count_nonzero((secondary > lo) & (secondary < hi)))
        for lo, hi in zip(primary[:-1], primary[1:])
    ]
