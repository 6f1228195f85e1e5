"""Multi-mode Mach-Zehnder single counts and NOON-state coincidences."""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import hilbert

from .core import (
    Family,
    PatternCurve,
    SingleSpectrumConfig,
    SpectralModeConfig,
    details_factor,
    local_extrema,
)

DEFAULT_CARRIER = 50.0  # rad*THz; used when a figure needs visible fringes


def _mzi(config: SingleSpectrumConfig, tau: np.ndarray) -> np.ndarray:
    n = config.n_modes
    env = np.exp(-(config.mode_width * tau) ** 2 / 8) / (2 * n)
    p = 0.5 + env * details_factor(n, config.mode_spacing * tau) * np.cos(
        config.center_frequency * tau
    )
    return np.clip(p, 0.0, 1.0)


def _noon(config: SpectralModeConfig, tau: np.ndarray) -> np.ndarray:
    n = config.n_modes
    env = np.exp(-(config.mode_width * tau) ** 2 / 4) / (2 * n)
    p = 0.5 + env * details_factor(n, 2 * config.mode_spacing * tau) * np.cos(
        2 * config.center_frequency * tau
    )
    return np.clip(p, 0.0, 1.0)


def mzi_probability(config: SingleSpectrumConfig, tau):
    """Single-count probability 1/2 + exp(-g^2 t^2/8) D_N(alpha t) cos(w0 t) / 2N."""
    out = _mzi(config, np.asarray(tau, dtype=float))
    return float(out) if out.ndim == 0 else out


def noon_probability(config: SpectralModeConfig, tau):
    """Coincidence probability for a two-photon NOON state on correlated modes.

    1/2 + exp(-g^2 t^2/4) D_N(2 alpha t) cos(2 w0 t) / 2N.
    """
    out = _noon(config, np.asarray(tau, dtype=float))
    return float(out) if out.ndim == 0 else out


def _pattern(family, fn, config, tau_min, tau_max, n_samples) -> PatternCurve:
    if not tau_min < tau_max:
        raise ValueError("tau_min must be < tau_max")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    tau = np.linspace(tau_min, tau_max, int(n_samples))
    return PatternCurve(
        abscissa=tau,
        values=fn(config, tau),
        family=family,
        config_snapshot=config,
        metadata={"center_frequency": config.center_frequency},
    )


def mzi_pattern(
    config: SingleSpectrumConfig,
    tau_min: float = -1.5,
    tau_max: float = 1.5,
    n_samples: int = 3001,
) -> PatternCurve:
    return _pattern(Family.MZI, _mzi, config, tau_min, tau_max, n_samples)


def noon_pattern(
    config: SpectralModeConfig,
    tau_min: float = -1.5,
    tau_max: float = 1.5,
    n_samples: int = 3001,
) -> PatternCurve:
    return _pattern(Family.NOON, _noon, config, tau_min, tau_max, n_samples)


def fringe_envelope(curve: PatternCurve) -> np.ndarray:
    """Amplitude of the carrier fringes, ``|analytic signal of P - 1/2|``.

    Exact when the carrier exceeds the spectral half-span of the modes,
    which holds for the default 50 rad*THz carrier up to N = 8 at alpha = 5.
    """
    return np.abs(hilbert(curve.values - 0.5))


def _main_peak_spacing(curve: PatternCurve) -> float:
    cfg = curve.config_snapshot
    scale = 1.0 if curve.family is Family.MZI else 2.0
    return math.pi / (scale * cfg.mode_spacing)


def envelope_secondary_peak_counts(curve: PatternCurve, prominence: float = 1e-6) -> list[int]:
    """Secondary peaks of the fringe envelope between adjacent main peaks.

    Only intervals well inside the sampled window are reported, because the
    analytic signal is distorted near the ends.
    """
    if curve.family not in (Family.MZI, Family.NOON):
        raise ValueError("only MZI and NOON patterns carry a fringe envelope")
    cfg = curve.config_snapshot
    env = fringe_envelope(curve)
    tau = curve.abscissa
    spacing = _main_peak_spacing(curve)
    maxima = local_extrema(env, "max", prominence)
    m = np.rint(tau[maxima] / spacing)
    main = maxima[np.abs(tau[maxima] - m * spacing) < spacing / (2 * cfg.n_modes)]
    # tau = 0 may be missed by peak finding because the envelope is flat-topped there
    zero = int(np.argmin(np.abs(tau)))
    main = np.union1d(main, [zero])
    secondary = np.setdiff1d(maxima, main)
    margin = 0.15 * (tau[-1] - tau[0])
    counts = []
    for lo, hi in zip(main[:-1], main[1:]):
        if tau[lo] < tau[0] + margin or tau[hi] > tau[-1] - margin:
            continue
        counts.append(int(np.count_nonzero((secondary > lo) & (secondary < hi))))
    return counts


def dominant_frequency(curve: PatternCurve, pad_factor: int = 8) -> float:
    """Angular frequency (rad/ps) of the tallest FFT peak of ``P - 1/2``.

    The peak is refined by parabolic interpolation of the log magnitude.
    """
    tau = curve.abscissa
    dt = tau[1] - tau[0]
    y = curve.values - 0.5
    n = pad_factor * y.size
    spec = np.abs(np.fft.rfft(y, n))
    omega = 2 * math.pi * np.fft.rfftfreq(n, dt)
    i = int(np.argmax(spec[1:])) + 1
    if 0 < i < spec.size - 1:
        a, b, c = np.log(spec[i - 1 : i + 2] + 1e-300)
        denom = a - 2 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
        return float(omega[i] + shift * (omega[1] - omega[0]))
    return float(omega[i])


def spectral_centroid(curve: PatternCurve) -> float:
    """Power-weighted mean angular frequency of ``P - 1/2``."""
    tau = curve.abscissa
    y = curve.values - 0.5
    spec = np.abs(np.fft.rfft(y, 8 * y.size)) ** 2
    omega = 2 * math.pi * np.fft.rfftfreq(8 * y.size, tau[1] - tau[0])
    return float(np.sum(omega * spec) / np.sum(spec))
