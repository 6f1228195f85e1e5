"""Brute-force quadrature of the un-approximated interference integrals.

Nothing here uses the closed forms.  The joint spectral intensity is built
from the full squared mode sum (cross terms included) and integrated on a
tensor Gauss-Legendre grid whose panels are laid out around the mode
centres.  Normalisation is done numerically with the same grid.  Each
result is recomputed with twice the nodes per panel until two successive
levels agree to ``rel_tolerance`` (measured against the normalisation).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import RegularGridInterpolator

from .core import (
    Correlation,
    Family,
    SingleSpectrumConfig,
    SpectralModeConfig,
    jsa_value,
    spectrum_value,
)


class QuadratureError(RuntimeError):
    """Refinement did not converge."""


class SupportClippedWarning(UserWarning):
    """A sampled projection has not decayed at the ends of its grid."""


@dataclass(frozen=True)
class QuadratureSpec:
    truncation_sigmas: float = 8.0
    points_per_mode: int = 64
    rel_tolerance: float = 1e-8
    max_refinements: int = 3

    def __post_init__(self) -> None:
        if self.truncation_sigmas < 4:
            raise ValueError("truncation_sigmas must be >= 4")
        if self.points_per_mode < 8:
            raise ValueError("points_per_mode must be >= 8")
        if not self.rel_tolerance > 0:
            raise ValueError("rel_tolerance must be > 0")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


DEFAULT_SPEC = QuadratureSpec()


def axis_rule(centres, half_width: float, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule covering ``[c - h, c + h]`` for every centre.

    Overlapping cells are merged and the merged span is cut into equal panels
    no wider than one cell, each carrying ``points`` nodes.
    """
    centres = np.sort(np.unique(np.asarray(centres, dtype=float)))
    spans: list[list[float]] = []
    for c in centres:
        lo, hi = c - half_width, c + half_width
        if spans and lo <= spans[-1][1]:
            spans[-1][1] = max(spans[-1][1], hi)
        else:
            spans.append([lo, hi])
    x_ref, w_ref = leggauss(points)
    nodes, weights = [], []
    for lo, hi in spans:
        n_panels = max(1, math.ceil((hi - lo) / (2 * half_width) - 1e-9))
        edges = np.linspace(lo, hi, n_panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            half = (b - a) / 2
            nodes.append((a + b) / 2 + half * x_ref)
            weights.append(half * w_ref)
    return np.concatenate(nodes), np.concatenate(weights)


def _cell_half_width(width: float, spec: QuadratureSpec) -> float:
    return spec.truncation_sigmas * width / math.sqrt(2)


def _axis_centres(config: SpectralModeConfig, correlation: Correlation):
    s = config.offsets()
    w0 = config.center_frequency
    sign = -1.0 if correlation is Correlation.ANTI_CORRELATED else 1.0
    return w0 + s, w0 + sign * s


@lru_cache(maxsize=128)
def _jsi_grid(config: SpectralModeConfig, correlation: Correlation, spec: QuadratureSpec, level: int):
    points = spec.points_per_mode * 2 ** level
    h = _cell_half_width(config.mode_width, spec)
    c1, c2 = _axis_centres(config, correlation)
    w1, a1 = axis_rule(c1, h, points)
    w2, a2 = axis_rule(c2, h, points)
    W1, W2 = np.meshgrid(w1, w2, indexing="ij")
    f = jsa_value(config, W1, W2, correlation)
    if correlation is Correlation.ANTI_CORRELATED:
        # f(w2, w1) f(w1, w2): the exchange-ordered product of the HOM integrand
        integrand = f * jsa_value(config, W2, W1, correlation)
    else:
        integrand = f * f
    weights = a1[:, None] * a2[None, :]
    norm = float(np.sum(weights * f * f))
    for arr in (w1, w2):
        arr.flags.writeable = False
    weighted = weights * integrand
    weighted.flags.writeable = False
    return w1, w2, weighted, norm


def _phase_integral(config, correlation, spec, level, tau, sign) -> np.ndarray:
    """sum_ij W_ij cos((w1_i + sign * w2_j) tau) / norm."""
    w1, w2, weighted, norm = _jsi_grid(config, correlation, spec, level)
    e1 = np.exp(1j * np.outer(w1, tau))
    e2 = np.exp(1j * sign * np.outer(w2, tau))
    inner = weighted @ e2
    return np.real(np.sum(e1 * inner, axis=0)) / norm


def _refine(evaluate, spec: QuadratureSpec, what: str) -> np.ndarray:
    previous = evaluate(0)
    for level in range(1, spec.max_refinements + 1):
        current = evaluate(level)
        if np.max(np.abs(current - previous)) <= spec.rel_tolerance:
            return current
        previous = current
    raise QuadratureError(
        f"{what} did not converge to {spec.rel_tolerance:g} after "
        f"{spec.max_refinements} refinements"
    )


def _scalar_or_array(tau, out):
    return float(out[0]) if np.ndim(tau) == 0 else out


def normalization(
    config: SpectralModeConfig,
    correlation: Correlation | str = Correlation.ANTI_CORRELATED,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Quadrature of |f|^2 at the finest level used by a converged evaluation."""
    return _jsi_grid(config, Correlation(correlation), spec, 1)[3]


def coincidence_numeric(config: SpectralModeConfig, tau, spec: QuadratureSpec = DEFAULT_SPEC):
    """HOM coincidence probability from the full two-dimensional integral.

    P = 1/2 - 1/2 iint f(w2,w1) f(w1,w2) cos((w1 - w2) tau) / iint |f|^2.
    """
    t = np.atleast_1d(np.asarray(tau, dtype=float))
    corr = Correlation.ANTI_CORRELATED
    integral = _refine(
        lambda lvl: _phase_integral(config, corr, spec, lvl, t, -1.0), spec, "HOM integral"
    )
    return _scalar_or_array(tau, 0.5 - 0.5 * integral)


def noon_numeric(config: SpectralModeConfig, tau, spec: QuadratureSpec = DEFAULT_SPEC):
    """NOON coincidence probability, 1/2 + 1/2 iint |f|^2 cos((w1 + w2) tau).

    Uses frequency-correlated modes.
    """
    t = np.atleast_1d(np.asarray(tau, dtype=float))
    corr = Correlation.CORRELATED
    integral = _refine(
        lambda lvl: _phase_integral(config, corr, spec, lvl, t, 1.0), spec, "NOON integral"
    )
    return _scalar_or_array(tau, 0.5 + 0.5 * integral)


@lru_cache(maxsize=128)
def _spectrum_rule(config: SingleSpectrumConfig, spec: QuadratureSpec, level: int):
    points = spec.points_per_mode * 2 ** level
    h = _cell_half_width(config.mode_width, spec)
    w, a = axis_rule(config.center_frequency + config.offsets(), h, points)
    weighted = a * spectrum_value(config, w) ** 2
    norm = float(np.sum(weighted))
    return w, weighted, norm


def mzi_numeric(config: SingleSpectrumConfig, tau, spec: QuadratureSpec = DEFAULT_SPEC):
    """Mach-Zehnder single-count probability, 1/2 [1 + int |f|^2 cos(w tau)]."""
    t = np.atleast_1d(np.asarray(tau, dtype=float))

    def evaluate(level):
        w, weighted, norm = _spectrum_rule(config, spec, level)
        return np.cos(np.outer(t, w)) @ weighted / norm

    integral = _refine(evaluate, spec, "MZI integral")
    return _scalar_or_array(tau, 0.5 + 0.5 * integral)


def cross_term_weight(config: SpectralModeConfig, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integrated mode-overlap terms of |f|^2 divided by the integrated mode terms.

    For two modes this is ``exp(-4 alpha^2 / gamma^2)``: neighbouring modes are
    ``2 alpha`` apart along both frequency axes.
    """
    if config.n_modes == 1:
        return 0.0
    corr = Correlation.ANTI_CORRELATED
    g2 = config.mode_width ** 2
    w0 = config.center_frequency

    def evaluate(level):
        points = spec.points_per_mode * 2 ** level
        h = _cell_half_width(config.mode_width, spec)
        c1, c2 = _axis_centres(config, corr)
        w1, a1 = axis_rule(c1, h, points)
        w2, a2 = axis_rule(c2, h, points)
        # separable modes: f_k(w1, w2) = g_k(w1) h_k(w2)
        g = [np.exp(-((w1 - w0 - s) ** 2) / g2) for s in config.offsets()]
        q = [np.exp(-((w2 - w0 + s) ** 2) / g2) for s in config.offsets()]
        diag = sum(np.dot(a1, gk * gk) * np.dot(a2, qk * qk) for gk, qk in zip(g, q))
        cross = 0.0
        for j in range(config.n_modes):
            for k in range(j + 1, config.n_modes):
                cross += 2 * np.dot(a1, g[j] * g[k]) * np.dot(a2, q[j] * q[k])
        return np.array([cross / diag])

    # ratios can be ~1e-11; compare levels relative to the ratio itself
    level0 = evaluate(0)
    for level in range(1, spec.max_refinements + 1):
        current = evaluate(level)
        if abs(current[0] - level0[0]) <= spec.rel_tolerance * max(abs(current[0]), 1e-300):
            return float(current[0])
        level0 = current
    raise QuadratureError("cross-term weight did not converge")


def analytic_cross_term_weight(config: SpectralModeConfig) -> float:
    """Closed-form Gaussian overlap ratio, ``(2/N) sum_{j<k} exp(-4 a^2 (k-j)^2 / g^2)``."""
    n = config.n_modes
    a2g2 = (config.mode_spacing / config.mode_width) ** 2
    total = sum((n - d) * math.exp(-4 * a2g2 * d * d) for d in range(1, n))
    return 2 * total / n


def _projection(config, grid, correlation, along_plus: bool, spec) -> np.ndarray:
    """Marginal of the normalised |f|^2 over one rotated axis.

    ``along_plus`` integrates over w+ = w1 + w2 and returns a function of
    w- = w1 - w2; otherwise the roles swap.  The Jacobian of the rotation
    is 1/2.
    """
    grid = np.asarray(grid, dtype=float)
    c1, c2 = _axis_centres(config, correlation)
    centres = c1 + c2 if along_plus else c1 - c2
    h = math.sqrt(2) * _cell_half_width(config.mode_width, spec)
    norm = _jsi_grid(config, correlation, spec, 1)[3]

    def evaluate(level):
        nodes, weights = axis_rule(centres, h, spec.points_per_mode * 2 ** level)
        if along_plus:
            plus, minus = nodes[:, None], grid[None, :]
        else:
            plus, minus = grid[None, :], nodes[:, None]
        f = jsa_value(config, (plus + minus) / 2, (plus - minus) / 2, correlation)
        return 0.5 * weights @ (f * f) / norm

    peak_scale = 1.0
    previous = evaluate(0)
    for level in range(1, spec.max_refinements + 1):
        current = evaluate(level)
        peak_scale = max(np.max(np.abs(current)), 1e-300)
        if np.max(np.abs(current - previous)) <= spec.rel_tolerance * peak_scale:
            break
        previous = current
    else:
        raise QuadratureError("projection did not converge")
    if grid.size and max(abs(current[0]), abs(current[-1])) > 1e-8 * peak_scale:
        warnings.warn(
            "projection support is clipped by the sampling grid", SupportClippedWarning, stacklevel=3
        )
    return current


def difference_frequency_projection(
    config: SpectralModeConfig, omega_minus_grid, spec: QuadratureSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Joint spectral intensity projected onto the w1 - w2 axis, unit integral."""
    return _projection(config, omega_minus_grid, Correlation.ANTI_CORRELATED, True, spec)


def sum_frequency_projection(
    config: SpectralModeConfig, omega_plus_grid, spec: QuadratureSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Intensity of the frequency-correlated JSA projected onto w1 + w2."""
    return _projection(config, omega_plus_grid, Correlation.CORRELATED, False, spec)


# -- tabulated single-mode functions ------------------------------------------------


@dataclass(frozen=True, eq=False)
class TabulatedMode:
    """A single-mode amplitude f0 sampled on a uniform grid (1-D or 2-D).

    ``axes`` holds one grid per dimension; ``values`` has shape
    ``tuple(len(a) for a in axes)``.  f0 is taken to be zero off the grid.
    """

    axes: tuple
    values: np.ndarray

    def __post_init__(self) -> None:
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        values = np.asarray(self.values, dtype=float)
        if len(axes) not in (1, 2):
            raise ValueError("tabulated modes must be 1-D or 2-D")
        if values.shape != tuple(a.size for a in axes):
            raise ValueError("values shape does not match the axes")
        for a in axes:
            d = np.diff(a)
            if a.size < 2 or not np.all(d > 0) or np.ptp(d) > 1e-9 * d.mean():
                raise ValueError("tabulation axes must be uniform and increasing")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)

    @property
    def step(self) -> float:
        return float(min(a[1] - a[0] for a in self.axes))


def load_tabulated(path) -> TabulatedMode:
    """Read a tabulated f0.

    Two-column text (``omega value`` per line) gives a 1-D mode.  A matrix is
    read as 2-D when preceded by two header lines::

        # grid w1 <start> <step> <count>
        # grid w2 <start> <step> <count>

    followed by ``count_w1`` rows of ``count_w2`` values.
    """
    text = Path(path).read_text().splitlines()
    grids = []
    for line in text:
        parts = line.lstrip("#").split()
        if line.startswith("#") and len(parts) == 5 and parts[0] == "grid":
            start, step, count = float(parts[2]), float(parts[3]), int(parts[4])
            grids.append(start + step * np.arange(count))
    data = np.loadtxt(path, comments="#", ndmin=2)
    if grids:
        if len(grids) != 2:
            raise ValueError(f"{path}: expected two '# grid' header lines")
        return TabulatedMode(axes=tuple(grids), values=data)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns or a '# grid' header")
    return TabulatedMode(axes=(data[:, 0],), values=data[:, 1])


def save_tabulated(path, mode: TabulatedMode) -> None:
    if len(mode.axes) == 1:
        np.savetxt(path, np.column_stack([mode.axes[0], mode.values]), fmt="%.17g")
        return
    header = "\n".join(
        f"grid w{i + 1} {float(a[0])!r} {float(a[1] - a[0])!r} {a.size}" for i, a in enumerate(mode.axes)
    )
    np.savetxt(path, mode.values, fmt="%.17g", header=header, comments="# ")


def _union_axis(axis: np.ndarray, shifts: np.ndarray, step: float) -> np.ndarray:
    lo = axis[0] + shifts.min()
    hi = axis[-1] + shifts.max()
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


def _trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = step / 2
    return w


def tabulated_probability(
    mode: TabulatedMode,
    family: Family | str,
    n_modes: int,
    mode_spacing: float,
    tau,
    center_frequency: float = 0.0,
):
    """Interference probability for N shifted copies of a tabulated f0.

    HOMI and NOON need a 2-D mode (anti-correlated and correlated copies
    respectively); MZI needs a 1-D one.  Copies are placed by linear
    interpolation and the integrals use the trapezoid rule on the
    tabulation step, so shifts that are whole multiples of the step are
    reproduced exactly.
    """
    family = Family(family)
    t = np.atleast_1d(np.asarray(tau, dtype=float))
    k = np.arange(1, n_modes + 1)
    shifts = (2 * k - n_modes - 1) * mode_spacing
    step = mode.step
    if family is Family.MZI:
        if len(mode.axes) != 1:
            raise ValueError("MZI needs a 1-D tabulated mode")
        w = _union_axis(mode.axes[0], shifts, step)
        f = sum(np.interp(w - s, mode.axes[0], mode.values, left=0.0, right=0.0) for s in shifts)
        weighted = _trapezoid_weights(w.size, step) * f * f
        integral = np.cos(np.outer(t, w + center_frequency)) @ weighted / weighted.sum()
        return _scalar_or_array(tau, 0.5 + 0.5 * integral)
    if family is Family.MSI or len(mode.axes) != 2:
        raise ValueError("HOMI and NOON need a 2-D tabulated mode")
    sign = -1.0 if family is Family.HOMI else 1.0
    w1 = _union_axis(mode.axes[0], shifts, step)
    w2 = _union_axis(mode.axes[1], sign * shifts, step)
    interp = RegularGridInterpolator(mode.axes, mode.values, bounds_error=False, fill_value=0.0)

    def build(a, b):
        A, B = np.meshgrid(a, b, indexing="ij")
        return sum(interp(np.stack([A - s, B - sign * s], axis=-1)) for s in shifts)

    f = build(w1, w2)
    weights = np.outer(_trapezoid_weights(w1.size, step), _trapezoid_weights(w2.size, step))
    norm = np.sum(weights * f * f)
    if family is Family.HOMI:
        if not np.allclose(w1, w2):
            raise ValueError("HOMI tabulation needs identical axes for the exchange product")
        integrand = f * f.T  # f(w2, w1) on a symmetric grid
        phase_sign = -1.0
    else:
        integrand = f * f
        phase_sign = 1.0
    x1 = w1 + center_frequency
    x2 = w2 + center_frequency
    e1 = np.exp(1j * np.outer(x1, t))
    e2 = np.exp(1j * phase_sign * np.outer(x2, t))
    integral = np.real(np.sum(e1 * ((weights * integrand) @ e2), axis=0)) / norm
    if family is Family.HOMI:
        return _scalar_or_array(tau, 0.5 - 0.5 * integral)
    return _scalar_or_array(tau, 0.5 + 0.5 * integral)
