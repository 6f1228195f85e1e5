import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interfero.core import (
    Correlation,
    Family,
    PatternCurve,
    SingleSpectrumConfig,
    SlitConfig,
    SpectralModeConfig,
    details_factor,
    jsa_value,
    local_extrema,
    spectrum_value,
)


def cosine_sum(n, x):
    return sum(np.cos((2 * k - n - 1) * np.asarray(x)) for k in range(1, n + 1))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_modes=0, mode_spacing=5.0, mode_width=2.0),
        dict(n_modes=2.5, mode_spacing=5.0, mode_width=2.0),
        dict(n_modes=True, mode_spacing=5.0, mode_width=2.0),
        dict(n_modes=2, mode_spacing=0.0, mode_width=2.0),
        dict(n_modes=2, mode_spacing=5.0, mode_width=-1.0),
        dict(n_modes=2, mode_spacing=5.0, mode_width=1.0, center_frequency=-3.0),
    ],
)
def test_spectral_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        SpectralModeConfig(**kwargs)


def test_spectral_config_offsets_and_separation():
    cfg = SpectralModeConfig(4, 5.0, 2.0)
    assert cfg.offsets().tolist() == [-15.0, -5.0, 5.0, 15.0]
    assert cfg.well_separated
    assert not SpectralModeConfig(4, 5.0, 4.5).well_separated
    assert SpectralModeConfig(3.0, 5.0, 2.0).n_modes == 3


def test_single_spectrum_config_requires_carrier():
    with pytest.raises(TypeError):
        SingleSpectrumConfig(2, 5.0, 2.0)
    assert SingleSpectrumConfig(3, 5.0, 2.0, 50.0).offsets().tolist() == [-10.0, 0.0, 10.0]


def test_slit_config_needs_width_below_pitch():
    with pytest.raises(ValueError):
        SlitConfig(3, 5e-4, 5e-4)
    with pytest.raises(ValueError):
        SlitConfig(3, 1e-5, 5e-4, wavelength=0.0)
    assert SlitConfig(3, 1e-4, 5e-4).block_width == pytest.approx(4e-4)


def test_details_factor_special_values():
    assert details_factor(1, 0.7) == 1.0
    for n in range(1, 9):
        assert details_factor(n, 0.0) == pytest.approx(n, abs=1e-14)
        # at x = m*pi the value is N * (-1)^(m(N-1))
        for m in range(-3, 4):
            assert details_factor(n, m * math.pi) == pytest.approx(n * (-1) ** (m * (n - 1)), abs=1e-12)


def test_details_factor_shapes():
    assert isinstance(details_factor(3, 0.2), float)
    out = details_factor(3, np.zeros((2, 3)))
    assert out.shape == (2, 3)
    with pytest.raises(ValueError):
        details_factor(0, 0.1)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 40), st.floats(-200, 200, allow_nan=False))
def test_details_factor_matches_cosine_sum(n, x):
    assert details_factor(n, x) == pytest.approx(float(cosine_sum(n, x)), abs=1e-9 * n)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.floats(-1e-5, 1e-5, allow_nan=False))
def test_details_factor_near_singularity_is_smooth(n, r):
    for m in (0, 1, 7):
        expected = (-1) ** (m * (n - 1)) * float(cosine_sum(n, r))
        assert details_factor(n, m * math.pi + r) == pytest.approx(expected, abs=1e-10)


def test_details_factor_large_argument_keeps_precision():
    x = 1e4 * math.pi + 0.3
    assert details_factor(7, x) == pytest.approx(math.sin(7 * 0.3) / math.sin(0.3), rel=1e-9)


def test_jsa_anti_correlated_is_exchange_symmetric():
    cfg = SpectralModeConfig(3, 5.0, 2.0)
    w = np.linspace(-20, 20, 41)
    f = jsa_value(cfg, w[:, None], w[None, :])
    np.testing.assert_allclose(f, f.T, atol=0)
    # mode centres on the anti-diagonal
    assert jsa_value(cfg, 10.0, -10.0) == pytest.approx(1.0, rel=1e-12)
    assert jsa_value(cfg, 10.0, 10.0) < 1e-20


def test_jsa_correlated_places_modes_on_diagonal():
    cfg = SpectralModeConfig(2, 5.0, 2.0, 40.0)
    assert jsa_value(cfg, 45.0, 45.0, Correlation.CORRELATED) == pytest.approx(1.0, rel=1e-12)
    assert jsa_value(cfg, 45.0, 35.0, "correlated") == pytest.approx(2 * math.exp(-25), rel=1e-12)


def test_spectrum_value_peaks_at_mode_centres():
    cfg = SingleSpectrumConfig(2, 5.0, 1.0, 50.0)
    assert spectrum_value(cfg, 45.0) == pytest.approx(1.0, rel=1e-12)
    assert spectrum_value(cfg, 50.0) == pytest.approx(2 * math.exp(-25), rel=1e-12)


def test_pattern_curve_validation():
    cfg = SpectralModeConfig(1, 5.0, 2.0)
    with pytest.raises(ValueError):
        PatternCurve(np.array([0.0, 0.0]), np.array([0.1, 0.2]), Family.HOMI, cfg)
    with pytest.raises(ValueError):
        PatternCurve(np.array([0.0, 1.0]), np.array([0.1, 1.2]), Family.HOMI, cfg)
    with pytest.raises(ValueError):
        PatternCurve(np.array([0.0, 1.0]), np.array([0.1, np.nan]), "homi", cfg)
    slits = SlitConfig(2, 1e-5, 5e-4)
    PatternCurve(np.array([0.0, 1.0]), np.array([4.0, 0.0]), "msi", slits)
    with pytest.raises(ValueError):
        PatternCurve(np.array([0.0, 1.0]), np.array([4.1, 0.0]), "msi", slits)


def test_pattern_curve_is_read_only():
    curve = PatternCurve([0.0, 1.0, 2.0], [0.1, 0.2, 0.3], "mzi", None)
    assert curve.family is Family.MZI
    assert len(curve) == 3
    with pytest.raises(ValueError):
        curve.values[0] = 0.5


def test_local_extrema_skips_plateaus():
    y = np.array([0.0, 1.0, 0.0, 1e-15, 0.0, 2.0, 0.0])
    assert local_extrema(y, "max", 1e-12).tolist() == [1, 5]
    assert local_extrema(-y, "min", 1e-12).tolist() == [1, 5]
    with pytest.raises(ValueError):
        local_extrema(y, "saddle")
