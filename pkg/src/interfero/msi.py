"""Fraunhofer multi-slit interference."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import Family, PatternCurve, SlitConfig, details_factor, local_extrema


class NyquistError(ValueError):
    """Sampling too coarse for the requested spatial frequencies."""


@dataclass(frozen=True)
class MsiPoint:
    sin_theta: float
    u: float
    v: float
    intensity: float


def phases(config: SlitConfig, sin_theta):
    """Single-slit phase ``u`` and adjacent-slit phase ``v``."""
    s = np.asarray(sin_theta, dtype=float)
    u = math.pi * config.slit_width * s / config.wavelength
    v = math.pi * config.slit_pitch * s / config.wavelength
    return u, v


def single_slit_envelope(config: SlitConfig, sin_theta):
    """``(sin u / u)^2``, the one-slit diffraction intensity."""
    u, _ = phases(config, sin_theta)
    # np.sinc is sin(pi t)/(pi t)
    return np.sinc(u / math.pi) ** 2


def _intensity(config: SlitConfig, sin_theta) -> np.ndarray:
    s = np.asarray(sin_theta, dtype=float)
    if np.any(np.abs(s) > 1):
        raise ValueError("|sin_theta| must not exceed 1")
    _, v = phases(config, s)
    return single_slit_envelope(config, s) * details_factor(config.n_slits, v) ** 2


def msi_intensity(config: SlitConfig, sin_theta: float) -> MsiPoint:
    """Intensity ``(sin u/u)^2 (sin Nv/sin v)^2`` at one angle, with A0 = 1."""
    s = float(sin_theta)
    u, v = phases(config, s)
    return MsiPoint(s, float(u), float(v), float(_intensity(config, s)))


def msi_intensity_array(config: SlitConfig, sin_theta) -> np.ndarray:
    return _intensity(config, sin_theta)


def msi_pattern(
    config: SlitConfig,
    sin_theta_min: float | None = None,
    sin_theta_max: float | None = None,
    n_samples: int = 3001,
) -> PatternCurve:
    """Sample the intensity over a sin(theta) window.

    The default window spans +-3.5 grating orders, enough to show three
    primary maxima.
    """
    half = 3.5 * config.wavelength / config.slit_pitch
    lo = -half if sin_theta_min is None else sin_theta_min
    hi = half if sin_theta_max is None else sin_theta_max
    if not lo < hi:
        raise ValueError("sin_theta_min must be < sin_theta_max")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    s = np.linspace(lo, hi, int(n_samples))
    return PatternCurve(
        abscissa=s,
        values=_intensity(config, s),
        family=Family.MSI,
        config_snapshot=config,
        metadata={"wavelength_m": config.wavelength},
    )


def aperture_function(config: SlitConfig, x) -> np.ndarray:
    """Transmission of the N-slit mask, centred on x = 0.

    Points exactly on a slit edge get 1/2, which makes Riemann sums of a
    sampled rectangle exact at zero spatial frequency.
    """
    x = np.asarray(x, dtype=float)
    centres = (np.arange(config.n_slits) - (config.n_slits - 1) / 2) * config.slit_pitch
    out = np.zeros_like(x)
    half = config.slit_width / 2
    for c in centres:
        dist = np.abs(x - c)
        edge = np.isclose(dist, half, rtol=0, atol=1e-12 * config.slit_pitch)
        out += np.where(edge, 0.5, (dist < half).astype(float))
    return out


def aperture_diffraction_amplitude(aperture, x_grid, spatial_frequency) -> np.ndarray:
    """Far-field amplitude ``int f0(x) exp(-2 pi i x q) dx`` with C = 1.

    ``aperture`` is sampled on the uniform grid ``x_grid`` and must vanish at
    both ends; ``spatial_frequency`` is ``sin(theta)/lambda`` in 1/m.  The
    result is complex; it is real for apertures symmetric about x = 0.
    """
    f = np.asarray(aperture, dtype=float)
    x = np.asarray(x_grid, dtype=float)
    q = np.atleast_1d(np.asarray(spatial_frequency, dtype=float))
    if f.shape != x.shape or f.ndim != 1 or f.size < 2:
        raise ValueError("aperture and x_grid must be matching 1-D arrays")
    dx = np.diff(x)
    step = dx.mean()
    if not np.all(dx > 0) or np.max(np.abs(dx - step)) > 1e-9 * step:
        raise ValueError("x_grid must be uniform and increasing")
    if f[0] != 0 or f[-1] != 0:
        raise ValueError("aperture must vanish at the grid edges")
    if q.size and np.max(np.abs(q)) >= 1 / (2 * step):
        raise NyquistError(
            f"spatial frequency {np.max(np.abs(q)):.4g} /m exceeds the Nyquist "
            f"limit {1 / (2 * step):.4g} /m of the aperture sampling"
        )
    return np.exp(-2j * math.pi * np.outer(q, x)) @ f * step


def primary_peak_mask(config: SlitConfig, sin_theta) -> np.ndarray:
    """True near a grating order ``d sin(theta) = m lambda``."""
    _, v = phases(config, sin_theta)
    m = np.rint(v / math.pi)
    return np.abs(v - m * math.pi) < math.pi / (2 * config.n_slits)


def secondary_peak_counts(curve: PatternCurve, prominence: float | None = None) -> list[int]:
    """Secondary maxima inside each complete interval between primary maxima."""
    config = curve.config_snapshot
    if prominence is None:
        prominence = 1e-6 * config.n_slits ** 2
    maxima = local_extrema(curve.values, "max", prominence)
    primary = maxima[primary_peak_mask(config, curve.abscissa[maxima])]
    secondary = np.setdiff1d(maxima, primary)
    return [
        int(np.count_nonzero((secondary > lo) & (secondary < hi)))
        for lo, hi in zip(primary[:-1], primary[1:])
    ]


def envelope_half_width(config: SlitConfig) -> float:
    """sin(theta) at which the one-slit envelope drops to half its peak."""
    # sinc^2(u) = 1/2 at u = 1.3915573...
    u_half = brentq(lambda u: (math.sin(u) / u) ** 2 - 0.5, 0.5, 2.0)
    return u_half * config.wavelength / (math.pi * config.slit_width)
