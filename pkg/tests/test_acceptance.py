"""Acceptance gate.

Every criterion prints one PASS/FAIL line (collected again in the pytest
terminal summary) and asserts at its stated tolerance and runtime budget.
Criteria with two independent clauses are split so each clause reports on
its own.
"""

import math
import time

import numpy as np
from scipy.optimize import brentq

from interfero import (
    SingleSpectrumConfig,
    SlitConfig,
    SpectralModeConfig,
    crlb_monte_carlo,
    details_factor,
    fisher_closed_form,
    fisher_curve,
    fisher_numeric,
    homi_pattern,
    homi_probability_array,
    max_fisher,
    msi_intensity_array,
    msi_pattern,
    mzi_pattern,
    mzi_probability,
    noon_pattern,
    noon_probability,
    sqrt_fi_vs_n_fit,
)
from interfero.core import local_extrema
from interfero.homi import homi_envelope_via_fourier, secondary_valley_counts
from interfero.msi import phases, secondary_peak_counts
from interfero.oracle import (
    coincidence_numeric,
    cross_term_weight,
    difference_frequency_projection,
    mzi_numeric,
    noon_numeric,
)

ALPHA, GAMMA = 5.0, 2.0
CRLB_SEED = 12345


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _gap(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# 1 ------------------------------------------------------------------------


def test_a01a_dip_bottom_is_zero(verdict):
    with Timer() as t:
        worst = max(
            float(homi_probability_array(SpectralModeConfig(n, ALPHA, GAMMA), np.array([0.0]))[0])
            for n in range(1, 9)
        )
    verdict("A1a dip bottom P(0)=0, N=1..8", worst <= 1e-12 and t.elapsed < 1,
            f"max P(0)={worst:.3e} (tol 1e-12), {t.elapsed:.3f}s")


def test_a01b_dip_tail_reaches_half(verdict):
    tau = np.concatenate([np.linspace(-6, -3.0001, 500), np.linspace(3.0001, 6, 500)])
    with Timer() as t:
        worst = max(
            _gap(homi_probability_array(SpectralModeConfig(n, ALPHA, GAMMA), tau), 0.5)
            for n in range(1, 9)
        )
    verdict("A1b |P-0.5| for |tau|>3 ps, N=1..8", worst <= 1e-8 and t.elapsed < 1,
            f"max |P-0.5|={worst:.3e} (tol 1e-8), {t.elapsed:.3f}s")


# 2 ------------------------------------------------------------------------


def test_a02a_homi_even_secondary_valleys(verdict):
    with Timer() as t:
        counts = {n: secondary_valley_counts(homi_pattern(SpectralModeConfig(n, ALPHA, GAMMA)))
                  for n in (4, 6, 8)}
    ok = all(c and all(k == n - 2 for k in c) for n, c in counts.items())
    verdict("A2a HOMI even N secondary valleys = N-2", ok and t.elapsed < 5,
            f"{counts}, {t.elapsed:.2f}s")


def test_a02b_homi_odd_secondary_valleys(verdict):
    with Timer() as t:
        counts = {n: secondary_valley_counts(homi_pattern(SpectralModeConfig(n, ALPHA, GAMMA)))
                  for n in (5, 7)}
    ok = all(c and all(k == (n - 3) // 2 for k in c) for n, c in counts.items())
    verdict("A2b HOMI odd N secondary valleys = (N-3)/2", ok and t.elapsed < 5,
            f"{counts}, {t.elapsed:.2f}s")


def test_a02c_msi_secondary_peaks(verdict):
    with Timer() as t:
        counts = {n: secondary_peak_counts(msi_pattern(SlitConfig(n, 1e-5, 5e-4)))
                  for n in range(3, 9)}
    ok = all(c and all(k == n - 2 for k in c) for n, c in counts.items())
    verdict("A2c MSI secondary peaks = N-2, N=3..8", ok and t.elapsed < 5,
            f"{counts}, {t.elapsed:.2f}s")


# 3 ------------------------------------------------------------------------


def test_a03_oracle_equivalence(verdict):
    tau = np.linspace(-1.5, 1.5, 101)
    gaps = {"homi": 0.0, "mzi": 0.0, "noon": 0.0}
    with Timer() as t:
        for alpha, gamma in ((5.0, 0.5), (5.0, 0.25), (2.5, 0.25)):
            for n in range(1, 7):
                pair = SpectralModeConfig(n, alpha, gamma, 50.0)
                single = SingleSpectrumConfig(n, alpha, gamma, 50.0)
                gaps["homi"] = max(gaps["homi"], _gap(coincidence_numeric(pair, tau),
                                                      homi_probability_array(pair, tau)))
                gaps["mzi"] = max(gaps["mzi"], _gap(mzi_numeric(single, tau), mzi_probability(single, tau)))
                gaps["noon"] = max(gaps["noon"], _gap(noon_numeric(pair, tau), noon_probability(pair, tau)))
    ok = max(gaps.values()) < 1e-4 and t.elapsed < 60
    detail = ", ".join(f"{k} {v:.2e}" for k, v in gaps.items())
    verdict("A3 closed form vs quadrature oracle, N<=6, gamma/alpha<=0.1", ok,
            f"{detail} (tol 1e-4), {t.elapsed:.2f}s")


# 4 ------------------------------------------------------------------------


def _cross_gap(gamma):
    cfg = SpectralModeConfig(2, ALPHA, gamma)
    tau = np.linspace(-1.5, 1.5, 101)
    return cross_term_weight(cfg), _gap(coincidence_numeric(cfg, tau), homi_probability_array(cfg, tau))


def test_a04a_cross_terms_negligible_at_narrow_modes(verdict):
    with Timer() as t:
        weight, gap = _cross_gap(2.0)
    ok = weight < 1e-5 and gap < weight and t.elapsed < 10
    verdict("A4a gamma=2: weight < 1e-5 and gap < weight", ok,
            f"weight={weight:.3e}, gap={gap:.3e}, {t.elapsed:.2f}s")


def test_a04b_cross_term_weight_large_at_wide_modes(verdict):
    with Timer() as t:
        weight, _ = _cross_gap(4.5)
    verdict("A4b gamma=4.5: weight > 1e-2", weight > 1e-2 and t.elapsed < 10,
            f"weight={weight:.3e}, {t.elapsed:.2f}s")


def test_a04c_gap_grows_with_mode_width(verdict):
    with Timer() as t:
        _, narrow = _cross_gap(2.0)
        weight, wide = _cross_gap(4.5)
    ok = wide > 100 * narrow and wide <= weight and t.elapsed < 10
    verdict("A4c gap grows from gamma=2 to 4.5 and stays within weight", ok,
            f"gap {narrow:.3e} -> {wide:.3e}, weight {weight:.3e}, {t.elapsed:.2f}s")


# 5 ------------------------------------------------------------------------


def test_a05a_fisher_closed_vs_numeric(verdict):
    rng = np.random.default_rng(2024)
    worst = 0.0
    with Timer() as t:
        for n in range(1, 9):
            cfg = SpectralModeConfig(n, ALPHA, GAMMA)
            taus = []
            while len(taus) < 200:
                x = rng.uniform(-1.5, 1.5)
                p = float(homi_probability_array(cfg, np.array([x]))[0])
                if abs(math.sin(2 * ALPHA * x)) >= 1e-5 and abs(x) >= 1e-5 and p * (1 - p) > 1e-12:
                    taus.append(x)
            taus = np.array(taus)
            closed = fisher_closed_form(cfg, taus)

            def prob(x, cfg=cfg):
                return float(homi_probability_array(cfg, np.array([x]))[0])

            numeric = np.array([fisher_numeric(prob, x) for x in taus])
            worst = max(worst, float(np.max(np.abs(numeric / closed - 1))))
    verdict("A5a FI closed form vs numeric, 200 tau x N=1..8", worst < 1e-4 and t.elapsed < 5,
            f"max rel err={worst:.2e} (tol 1e-4), {t.elapsed:.2f}s")


def test_a05b_fisher_single_mode_value(verdict):
    with Timer() as t:
        value = fisher_closed_form(SpectralModeConfig(1, ALPHA, 2.0), 1.0)
    expected = 4 / (math.e ** 2 - 1)
    err = abs(value - expected)
    verdict("A5b FI(N=1, tau=1, gamma=2) = 4/(e^2-1)", err < 1e-6 and t.elapsed < 5,
            f"{value:.10f} vs {expected:.10f}, err={err:.1e}")


# 6 ------------------------------------------------------------------------


def test_a06_fisher_double_peak_n8(verdict):
    with Timer() as t:
        fc = fisher_curve(SpectralModeConfig(8, ALPHA, GAMMA))
        fi, tau = fc.fi_values, fc.tau_grid
        idx = local_extrema(fi, "max", 0.0)
        # a strict interior maximum at tau = 0 is also a candidate
        big = idx[fi[idx] >= 0.9 * fi.max()]
    step = tau[1] - tau[0]
    locs = tau[big]
    ok = (
        big.size == 2
        and abs(locs[0] + locs[1]) <= step
        and locs[0] < 0 < locs[1]
        and t.elapsed < 2
    )
    verdict("A6 FI(N=8) has two symmetric global-scale maxima flanking tau=0", ok,
            f"maxima >= 0.9*max at tau={np.round(locs, 4).tolist()}, "
            f"values={np.round(fi[big], 1).tolist()}, {t.elapsed:.2f}s")


# 7 ------------------------------------------------------------------------

_FIT = {}


def _fit():
    if "fit" not in _FIT:
        start = time.perf_counter()
        _FIT["fit"] = sqrt_fi_vs_n_fit(ALPHA, GAMMA, range(1, 41))
        _FIT["elapsed"] = time.perf_counter() - start
    return _FIT["fit"], _FIT["elapsed"]


def test_a07a_sqrt_fi_linear_r_squared(verdict):
    fit, elapsed = _fit()
    verdict("A7a sqrt(FI_max) vs N=1..40: R^2 > 0.999", fit.r_squared > 0.999 and elapsed < 120,
            f"R^2={fit.r_squared:.6f}, slope={fit.slope:.4f}, intercept={fit.intercept:.4f}, {elapsed:.2f}s")


def test_a07b_sqrt_fi_linear_residuals(verdict):
    fit, elapsed = _fit()
    res = fit.relative_residuals()
    worst = int(np.argmax(res))
    verdict("A7b sqrt(FI_max) per-point residual < 2%", bool(np.all(res < 0.02)) and elapsed < 120,
            f"max residual {res[worst]:.2%} at N={fit.n_values[worst]}, "
            f"{int(np.sum(res >= 0.02))} of {res.size} points >= 2%")


# 8 ------------------------------------------------------------------------

_CRLB = {}


def _crlb():
    if "report" not in _CRLB:
        start = time.perf_counter()
        cfg = SpectralModeConfig(1, ALPHA, GAMMA)
        _, fi_max = max_fisher(cfg)
        # FI peaks where P -> 0; take the nearest delay with 0 < P < 1 at 99% of the peak
        tau = brentq(lambda x: fisher_closed_form(cfg, x) - 0.99 * fi_max, 1e-3, 1.0)
        _CRLB["report"] = crlb_monte_carlo(cfg, tau, 10_000, 1_000, seed=CRLB_SEED)
        _CRLB["elapsed"] = time.perf_counter() - start
    return _CRLB["report"], _CRLB["elapsed"]


def test_a08a_estimator_sd_not_below_crlb(verdict):
    rep, elapsed = _crlb()
    verdict("A8a MLE SD >= CRLB (N=1, Num=1e4, 1e3 trials)",
            rep.estimator_sd >= rep.crlb_sd and elapsed < 60,
            f"SD={rep.estimator_sd:.5e}, CRLB={rep.crlb_sd:.5e}, ratio={rep.efficiency_ratio:.4f}, "
            f"tau={rep.true_tau:.4f}, seed={CRLB_SEED}, {elapsed:.2f}s")


def test_a08b_estimator_sd_within_ten_percent(verdict):
    rep, elapsed = _crlb()
    ok = abs(rep.efficiency_ratio - 1) <= 0.1 and elapsed < 60
    verdict("A8b MLE SD within 10% of CRLB", ok, f"ratio={rep.efficiency_ratio:.4f}, {elapsed:.2f}s")


# 9 ------------------------------------------------------------------------


def test_a09_difference_projection_fourier(verdict):
    grid = np.linspace(-60, 60, 4001)
    tau = np.linspace(-1.5, 1.5, 301)
    errs = {}
    with Timer() as t:
        for n in (1, 3):
            cfg = SpectralModeConfig(n, ALPHA, GAMMA)
            ft = homi_envelope_via_fourier(difference_frequency_projection(cfg, grid), grid, tau)
            errs[n] = _gap(ft, 1 - 2 * homi_probability_array(cfg, tau))
    ok = max(errs.values()) <= 1e-3 and t.elapsed < 10
    verdict("A9 Re FT of difference projection = 1-2P, N=1,3", ok,
            f"errors {', '.join(f'N={k}: {v:.2e}' for k, v in errs.items())} (tol 1e-3), {t.elapsed:.2f}s")


# 10 -----------------------------------------------------------------------


def test_a10a_cosine_sum_identity(verdict):
    x = np.concatenate([np.linspace(-30, 30, 6001), math.pi * np.arange(-8, 9)])
    with Timer() as t:
        worst = max(
            _gap(details_factor(n, x), sum(np.cos((2 * k - n - 1) * x) for k in range(1, n + 1)))
            for n in range(1, 13)
        )
    verdict("A10a sin(Nx)/sin(x) = cosine sum", worst <= 1e-10 and t.elapsed < 5,
            f"max err={worst:.2e} (tol 1e-10), {t.elapsed:.3f}s")


def test_a10b_msi_phasor_sum(verdict):
    worst = 0.0
    with Timer() as t:
        for n in range(1, 9):
            cfg = SlitConfig(n, 1e-5, 5e-4)
            s = np.linspace(-3.5e-3, 3.5e-3, 3001)
            u, v = phases(cfg, s)
            direct = np.sinc(u / math.pi) ** 2 * np.abs(np.exp(2j * np.outer(v, np.arange(n))).sum(1)) ** 2
            worst = max(worst, _gap(msi_intensity_array(cfg, s), direct))
    verdict("A10b MSI intensity = |phasor sum|^2 envelope", worst <= 1e-10 and t.elapsed < 5,
            f"max err={worst:.2e} (tol 1e-10), {t.elapsed:.3f}s")


def test_a10c_noon_homi_reflection(verdict):
    tau = np.linspace(-3, 3, 3001)
    with Timer() as t:
        worst = max(
            _gap(noon_probability(SpectralModeConfig(n, ALPHA, GAMMA, 0.0), tau),
                 1 - homi_probability_array(SpectralModeConfig(n, ALPHA, GAMMA), tau))
            for n in range(1, 9)
        )
    verdict("A10c NOON(w0=0) = 1 - HOMI", worst <= 1e-12 and t.elapsed < 5,
            f"max err={worst:.2e} (tol 1e-12), {t.elapsed:.3f}s")


def test_a10d_probability_bounds(verdict):
    worst = 0.0
    with Timer() as t:
        for n in range(1, 9):
            for alpha, gamma in ((5.0, 2.0), (2.5, 4.5), (7.5, 0.5)):
                pair = SpectralModeConfig(n, alpha, gamma, 50.0)
                single = SingleSpectrumConfig(n, alpha, gamma, 50.0)
                for curve in (homi_pattern(pair), noon_pattern(pair), mzi_pattern(single)):
                    worst = max(worst, -curve.values.min(), curve.values.max() - 1)
            v = msi_pattern(SlitConfig(n, 1e-5, 5e-4)).values
            worst = max(worst, -v.min(), v.max() - n * n)
    verdict("A10d all patterns within physical bounds", worst <= 0 and t.elapsed < 5,
            f"max violation={max(worst, 0.0):.2e}, {t.elapsed:.2f}s")
