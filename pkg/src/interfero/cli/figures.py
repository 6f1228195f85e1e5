"""Panels of the reference figures, written as CSV and SVG."""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np

from ..core import Correlation, SingleSpectrumConfig, SlitConfig, SpectralModeConfig, jsa_value, spectrum_value
from ..fisher import fisher_curve, sqrt_fi_vs_n_fit
from ..homi import homi_pattern
from ..msi import aperture_function, msi_pattern
from ..mzi_noon import DEFAULT_CARRIER, mzi_pattern, noon_pattern
from . import svg
from .files import write_csv, write_json

ALPHA = 5.0
GAMMA = 2.0
SLIT_WIDTH = 1e-5
SLIT_PITCH = 5e-4
JSA_POINTS = 161
APERTURE_POINTS = 2001


class Emitter:
    """Collects panel files for one figure run."""

    def __init__(self, out_dir, formats, figure: str):
        self.out = Path(out_dir)
        self.formats = set(formats)
        self.figure = figure
        self.paths: list[Path] = []

    def curve(self, stem, x, columns: dict, header: dict, title, xlabel, ylabel):
        names = list(columns)
        header = {"figure": self.figure, "panel": stem, **header}
        if "csv" in self.formats:
            self.paths.append(write_csv(self.out / f"{stem}.csv", {xlabel: x, **columns}, header))
        if "svg" in self.formats:
            series = {k: columns[k] for k in names}
            self.paths.append(svg.line_plot(self.out / f"{stem}.svg", x, series, title, xlabel, ylabel))

    def grid(self, stem, x, y, z, header: dict, title, labels=("w1", "w2", "jsi")):
        header = {"figure": self.figure, "panel": stem, **header}
        if "csv" in self.formats:
            X, Y = np.meshgrid(x, y, indexing="ij")
            cols = {labels[0]: X, labels[1]: Y, labels[2]: z}
            self.paths.append(write_csv(self.out / f"{stem}.csv", cols, header))
        if "svg" in self.formats:
            self.paths.append(svg.heatmap(self.out / f"{stem}.svg", x, y, z, title, labels[0], labels[1]))

    def json(self, stem, obj):
        if "json" in self.formats or "csv" in self.formats:
            self.paths.append(write_json(self.out / f"{stem}.json", obj))


def _jsi_extent(config: SpectralModeConfig) -> float:
    return (config.n_modes - 1) * config.mode_spacing + 5 * config.mode_width


def jsi_panel(em: Emitter, stem, config: SpectralModeConfig, correlation=Correlation.ANTI_CORRELATED):
    half = _jsi_extent(config)
    w = config.center_frequency + np.linspace(-half, half, JSA_POINTS)
    f = jsa_value(config, w[:, None], w[None, :], correlation)
    jsi = f * f / np.max(f * f)
    em.grid(stem, w, w, jsi, {"config": config, "correlation": Correlation(correlation).value},
            f"|f(w1,w2)|^2  N={config.n_modes}")


def homi_panel(em: Emitter, stem, config: SpectralModeConfig):
    c = homi_pattern(config)
    em.curve(stem, c.abscissa, {"probability": c.values}, {"config": config, **c.metadata},
             f"HOM coincidence  N={config.n_modes}", "tau_ps", "P")


def aperture_panel(em: Emitter, stem, config: SlitConfig):
    half = config.n_slits * config.slit_pitch / 2 + config.slit_pitch
    x = np.linspace(-half, half, APERTURE_POINTS)
    em.curve(stem, x, {"transmission": aperture_function(config, x)}, {"config": config},
             f"aperture  N={config.n_slits}", "x_m", "f0")


def msi_panel(em: Emitter, stem, config: SlitConfig):
    c = msi_pattern(config)
    em.curve(stem, c.abscissa, {"intensity": c.values}, {"config": config, **c.metadata},
             f"multi-slit intensity  N={config.n_slits}", "sin_theta", "I")


def fig2(out_dir, formats) -> list[Path]:
    em = Emitter(out_dir, formats, "fig2")
    for n in range(1, 9):
        mode = SpectralModeConfig(n, ALPHA, GAMMA)
        slit = SlitConfig(n, SLIT_WIDTH, SLIT_PITCH)
        jsi_panel(em, f"fig2_a{n}_jsi", mode)
        homi_panel(em, f"fig2_b{n}_homi", mode)
        aperture_panel(em, f"fig2_c{n}_slits", slit)
        msi_panel(em, f"fig2_d{n}_msi", slit)
    return em.paths


def fig3(out_dir, formats) -> list[Path]:
    em = Emitter(out_dir, formats, "fig3")
    for i, gamma in enumerate((0.5, 2.5, 4.5), start=1):
        mode = SpectralModeConfig(4, ALPHA, gamma)
        jsi_panel(em, f"fig3_a{i}_jsi_gamma{gamma:g}", mode)
        homi_panel(em, f"fig3_b{i}_homi_gamma{gamma:g}", mode)
    for i, width in enumerate((1e-4, 1.5e-4, 2e-4), start=1):
        slit = SlitConfig(4, width, SLIT_PITCH)
        aperture_panel(em, f"fig3_c{i}_slits_a{width:g}", slit)
        msi_panel(em, f"fig3_d{i}_msi_a{width:g}", slit)
    return em.paths


def fig4(out_dir, formats) -> list[Path]:
    em = Emitter(out_dir, formats, "fig4")
    for i, alpha in enumerate((2.5, 5.0, 7.5), start=1):
        mode = SpectralModeConfig(4, alpha, GAMMA)
        jsi_panel(em, f"fig4_a{i}_jsi_alpha{alpha:g}", mode)
        homi_panel(em, f"fig4_b{i}_homi_alpha{alpha:g}", mode)
    for i, pitch in enumerate((3e-4, 6e-4, 9e-4), start=1):
        slit = SlitConfig(4, 1.5e-4, pitch)
        aperture_panel(em, f"fig4_c{i}_slits_d{pitch:g}", slit)
        msi_panel(em, f"fig4_d{i}_msi_d{pitch:g}", slit)
    return em.paths


def fig5(out_dir, formats) -> list[Path]:
    em = Emitter(out_dir, formats, "fig5")
    for n in range(1, 9):
        mode = SpectralModeConfig(n, ALPHA, GAMMA)
        fc = fisher_curve(mode)
        em.curve(f"fig5_a{n}_fisher", fc.tau_grid, {"fisher_information": fc.fi_values},
                 {"config": mode}, f"Fisher information  N={n}", "tau_ps", "FI_ps^-2")
    return em.paths


def fig6(out_dir, formats, n_max: int = 40) -> list[Path]:
    em = Emitter(out_dir, formats, "fig6")
    fit = sqrt_fi_vs_n_fit(ALPHA, GAMMA, range(1, n_max + 1))
    n = np.array(fit.n_values, dtype=float)
    em.curve("fig6_sqrt_fi_max", n,
             {"sqrt_fi_max": fit.sqrt_fi_max, "linear_fit": fit.slope * n + fit.intercept},
             {"alpha": ALPHA, "gamma": GAMMA}, "sqrt(max FI) against N", "n_modes", "sqrt_fi_max")
    em.json("fig6_fit", {
        "alpha": ALPHA,
        "gamma": GAMMA,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "max_relative_residual": float(np.max(fit.relative_residuals())),
    })
    return em.paths


def fig7(out_dir, formats, carrier: float = DEFAULT_CARRIER) -> list[Path]:
    em = Emitter(out_dir, formats, "fig7")
    for n in range(1, 9):
        single = SingleSpectrumConfig(n, ALPHA, GAMMA, carrier)
        pair = SpectralModeConfig(n, ALPHA, GAMMA, carrier)
        half = _jsi_extent(pair)
        w = carrier + np.linspace(-half, half, 2001)
        amp = spectrum_value(single, w)
        em.curve(f"fig7_a{n}_spectrum", w, {"intensity": amp * amp / np.max(amp * amp)},
                 {"config": single}, f"|f(w)|^2  N={n}", "omega_rad_THz", "|f|^2")
        c = mzi_pattern(single)
        em.curve(f"fig7_b{n}_mzi", c.abscissa, {"probability": c.values},
                 {"config": single, **c.metadata}, f"MZI single counts  N={n}", "tau_ps", "P")
        jsi_panel(em, f"fig7_c{n}_jsi", pair, Correlation.CORRELATED)
        c = noon_pattern(pair)
        em.curve(f"fig7_d{n}_noon", c.abscissa, {"probability": c.values},
                 {"config": pair, **c.metadata}, f"NOON coincidence  N={n}", "tau_ps", "P")
    return em.paths


FIGURES: dict[str, Callable[..., list[Path]]] = {
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
}


def run_figure(figure_id: str, out_dir, formats=("csv", "svg")) -> list[Path]:
    try:
        fn = FIGURES[figure_id]
    except KeyError:
        raise ValueError(f"unknown figure {figure_id!r}; choose from {sorted(FIGURES)}") from None
    return fn(out_dir, formats)
