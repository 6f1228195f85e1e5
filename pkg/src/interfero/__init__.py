"""Interference patterns of multi-mode photon pairs and multi-slit gratings."""

from .core import (
    Correlation,
    Family,
    PatternCurve,
    SingleSpectrumConfig,
    SlitConfig,
    SpectralModeConfig,
    details_factor,
)
from .fisher import (
    CrlbReport,
    FisherCurve,
    NonIdentifiableError,
    crlb_monte_carlo,
    fisher_closed_form,
    fisher_curve,
    fisher_numeric,
    max_fisher,
    sqrt_fi_vs_n_fit,
)
from .homi import homi_pattern, homi_probability, homi_probability_array
from .msi import msi_intensity, msi_intensity_array, msi_pattern
from .mzi_noon import mzi_pattern, mzi_probability, noon_pattern, noon_probability

__version__ = "0.1.0"

__all__ = [
    "Correlation",
    "CrlbReport",
    "Family",
    "FisherCurve",
    "NonIdentifiableError",
    "PatternCurve",
    "SingleSpectrumConfig",
    "SlitConfig",
    "SpectralModeConfig",
    "crlb_monte_carlo",
    "details_factor",
    "fisher_closed_form",
    "fisher_curve",
    "fisher_numeric",
    "homi_pattern",
    "homi_probability",
    "homi_probability_array",
    "max_fisher",
    "msi_intensity",
    "msi_intensity_array",
    "msi_pattern",
    "mzi_pattern",
    "mzi_probability",
    "noon_pattern",
    "noon_probability",
    "sqrt_fi_vs_n_fit",
]
