"""Shared domain types and the ``sin(Nx)/sin(x)`` kernel.

Units are fixed package-wide: angular frequencies in rad*THz, delays in ps,
lengths in m.  With that choice every phase such as ``alpha * tau`` is
already dimensionless.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.signal import find_peaks

# below this |sin x| the ratio form loses digits; the cosine sum is used instead
SINGULAR_SIN_THRESHOLD = 1e-6


class Family(str, enum.Enum):
    HOMI = "homi"
    MSI = "msi"
    MZI = "mzi"
    NOON = "noon"


class Correlation(str, enum.Enum):
    """Placement of the spectral modes in the (w1, w2) plane."""

    ANTI_CORRELATED = "anti_correlated"  # HOM: modes on the anti-diagonal
    CORRELATED = "correlated"  # NOON: modes on the diagonal


def _check_positive_int(name: str, value: int) -> None:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class SpectralModeConfig:
    """Multi-mode Gaussian joint spectral amplitude.

    ``n_modes`` Gaussian modes of width ``mode_width`` whose centres are
    spaced ``2 * mode_spacing`` apart along each frequency axis.
    """

    n_modes: int
    mode_spacing: float
    mode_width: float
    center_frequency: float = 0.0

    def __post_init__(self) -> None:
        _check_positive_int("n_modes", self.n_modes)
        object.__setattr__(self, "n_modes", int(self.n_modes))
        if not self.mode_spacing > 0:
            raise ValueError(f"mode_spacing must be > 0, got {self.mode_spacing}")
        if not self.mode_width > 0:
            raise ValueError(f"mode_width must be > 0, got {self.mode_width}")
        if not self.center_frequency >= 0:
            raise ValueError(
                f"center_frequency must be >= 0, got {self.center_frequency}"
            )

    @property
    def well_separated(self) -> bool:
        return self.mode_width / self.mode_spacing <= 0.5

    def offsets(self) -> np.ndarray:
        """Signed mode offsets ``(2k - N - 1) * alpha`` for k = 1..N."""
        k = np.arange(1, self.n_modes + 1)
        return (2 * k - self.n_modes - 1) * self.mode_spacing


@dataclass(frozen=True)
class SingleSpectrumConfig:
    """One-photon spectrum made of ``n_modes`` Gaussian lines."""

    n_modes: int
    mode_spacing: float
    mode_width: float
    center_frequency: float

    def __post_init__(self) -> None:
        _check_positive_int("n_modes", self.n_modes)
        object.__setattr__(self, "n_modes", int(self.n_modes))
        if not self.mode_spacing > 0:
            raise ValueError(f"mode_spacing must be > 0, got {self.mode_spacing}")
        if not self.mode_width > 0:
            raise ValueError(f"mode_width must be > 0, got {self.mode_width}")
        if not self.center_frequency >= 0:
            raise ValueError(
                f"center_frequency must be >= 0, got {self.center_frequency}"
            )

    @property
    def well_separated(self) -> bool:
        return self.mode_width / self.mode_spacing <= 0.5

    def offsets(self) -> np.ndarray:
        k = np.arange(1, self.n_modes + 1)
        return (2 * k - self.n_modes - 1) * self.mode_spacing


@dataclass(frozen=True)
class SlitConfig:
    """N identical slits of width ``slit_width`` repeated every ``slit_pitch``."""

    n_slits: int
    slit_width: float
    slit_pitch: float
    wavelength: float = 500e-9

    def __post_init__(self) -> None:
        _check_positive_int("n_slits", self.n_slits)
        object.__setattr__(self, "n_slits", int(self.n_slits))
        if not 0 < self.slit_width < self.slit_pitch:
            raise ValueError(
                "need 0 < slit_width < slit_pitch, got "
                f"a={self.slit_width}, d={self.slit_pitch}"
            )
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")

    @property
    def block_width(self) -> float:
        return self.slit_pitch - self.slit_width


@dataclass(frozen=True, eq=False)
class PatternCurve:
    """A sampled interference curve.

    ``abscissa`` is the delay in ps for the temporal families and sin(theta)
    for the multi-slit family.
    """

    abscissa: np.ndarray
    values: np.ndarray
    family: Family
    config_snapshot: Any
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        x = np.array(self.abscissa, dtype=float)
        y = np.array(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("abscissa and values must be 1-D and the same length")
        if x.size >= 2 and not np.all(np.diff(x) > 0):
            raise ValueError("abscissa must be strictly increasing")
        if not np.all(np.isfinite(y)):
            raise ValueError("pattern values must be finite")
        family = Family(self.family)
        tol = 1e-12
        if family is Family.MSI:
            upper = self.config_snapshot.n_slits ** 2
            if y.min() < -tol or y.max() > upper * (1 + tol):
                raise ValueError(f"MSI intensity outside [0, {upper}]")
        elif y.min() < -tol or y.max() > 1 + tol:
            raise ValueError(f"{family.value} probability outside [0, 1]")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "abscissa", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "family", family)

    def __len__(self) -> int:
        return self.abscissa.size


def _cosine_sum(n: int, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for k in range(1, n + 1):
        out += np.cos((2 * k - n - 1) * x)
    return out


def details_factor(n_modes: int, x):
    """Evaluate ``sin(N x) / sin(x)`` including its removable singularities.

    The argument is first reduced to ``x = m*pi + r`` with ``|r| <= pi/2``,
    using ``D_N(m*pi + r) = (-1)**(m*(N-1)) * D_N(r)``, so that ``N*r`` carries
    no absolute rounding inherited from a large ``x``.  Where ``|sin r|`` is
    below :data:`SINGULAR_SIN_THRESHOLD` the exact cosine sum
    ``sum_k cos((2k-N-1) r)`` replaces the ratio.

    Accepts scalars or arrays; returns the same shape.
    """
    _check_positive_int("n_modes", n_modes)
    n = int(n_modes)
    xa = np.asarray(x, dtype=float)
    m = np.rint(xa / math.pi)
    r = xa - m * math.pi
    sign = np.where((m * (n - 1)) % 2 == 0, 1.0, -1.0)
    s = np.sin(r)
    near = np.abs(s) < SINGULAR_SIN_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(n * r) / s
    if np.any(near):
        ratio = np.where(near, _cosine_sum(n, np.where(near, r, 0.0)), ratio)
    out = sign * ratio
    if out.ndim == 0:
        return float(out)
    return out


def jsa_value(
    config: SpectralModeConfig,
    w1,
    w2,
    correlation: Correlation | str = Correlation.ANTI_CORRELATED,
):
    """Un-normalised multi-mode Gaussian joint spectral amplitude f(w1, w2).

    Mode k sits at ``(w0 + s_k, w0 - s_k)`` when anti-correlated and at
    ``(w0 + s_k, w0 + s_k)`` when correlated, with ``s_k = (2k-N-1) alpha``.
    """
    correlation = Correlation(correlation)
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    g2 = config.mode_width ** 2
    sign = -1.0 if correlation is Correlation.ANTI_CORRELATED else 1.0
    d1 = w1 - config.center_frequency
    d2 = w2 - config.center_frequency
    total = np.zeros(np.broadcast(d1, d2).shape)
    for s in config.offsets():
        total = total + np.exp(-((d1 - s) ** 2) / g2 - ((d2 - sign * s) ** 2) / g2)
    if total.ndim == 0:
        return float(total)
    return total


def spectrum_value(config: SingleSpectrumConfig, w):
    """Un-normalised multi-mode Gaussian one-photon amplitude f(w)."""
    w = np.asarray(w, dtype=float)
    d = w - config.center_frequency
    total = np.zeros_like(d)
    for s in config.offsets():
        total = total + np.exp(-((d - s) ** 2) / config.mode_width ** 2)
    if total.ndim == 0:
        return float(total)
    return total


def local_extrema(values, kind: str = "max", prominence: float = 0.0) -> np.ndarray:
    """Indices of strict interior local maxima (or minima) of a sampled curve.

    Extrema whose prominence does not exceed ``prominence`` are discarded;
    this rejects floating-point plateaus.
    """
    y = np.asarray(values, dtype=float)
    if kind == "min":
        y = -y
    elif kind != "max":
        raise ValueError("kind must be 'max' or 'min'")
    idx, props = find_peaks(y, prominence=(None, None))
    keep = props["prominences"] > prominence
    return idx[keep]
