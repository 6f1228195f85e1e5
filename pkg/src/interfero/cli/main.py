"""``interfero`` command."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .. import __version__
from ..core import Family, PatternCurve, SingleSpectrumConfig, SlitConfig, SpectralModeConfig
from ..fisher import crlb_monte_carlo, fisher_curve, max_fisher, sqrt_fi_vs_n_fit
from ..homi import homi_pattern
from ..msi import msi_pattern
from ..mzi_noon import DEFAULT_CARRIER, mzi_pattern, noon_pattern
from ..oracle import load_tabulated, tabulated_probability
from . import svg
from .figures import FIGURES, run_figure
from .files import OutputError, dumps, write_csv, write_json
from .validate import PROFILES, report, run_checks

FORMATS = ("csv", "json", "svg")

_TAU = {"tau_min": (float, -1.5), "tau_max": (float, 1.5), "n_samples": (int, 3001)}
_MODES = {
    "n_modes": (int, 4),
    "mode_spacing": (float, 5.0),
    "mode_width": (float, 2.0),
}

# family -> {parameter: (type, default)}
PARAMETERS: dict[str, dict] = {
    "homi": {**_MODES, "center_frequency": (float, 0.0), **_TAU},
    "mzi": {**_MODES, "center_frequency": (float, DEFAULT_CARRIER), **_TAU},
    "noon": {**_MODES, "center_frequency": (float, DEFAULT_CARRIER), **_TAU},
    "msi": {
        "n_slits": (int, 4),
        "slit_width": (float, 1e-5),
        "slit_pitch": (float, 5e-4),
        "wavelength": (float, 500e-9),
        "sin_theta_min": (float, None),
        "sin_theta_max": (float, None),
        "n_samples": (int, 3001),
    },
    "fisher": {
        **_MODES,
        **_TAU,
        "crlb_trials": (int, 0),
        "crlb_measurements": (int, 10000),
        "true_tau": (float, None),
    },
    "fit": {"alpha": (float, 5.0), "gamma": (float, 2.0), "n_min": (int, 1), "n_max": (int, 40)},
    "validate": {"profile": (str, "default")},
}


class UsageError(ValueError):
    pass


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def resolve_parameters(family: str, config_file=None, overrides=()) -> dict:
    """Merge defaults, a JSON config file and ``key=value`` overrides.

    The file holds a flat JSON object, or one with a ``parameters`` object.
    Unknown keys and values of the wrong type are rejected.
    """
    schema = PARAMETERS[family]
    given: dict = {}
    if config_file is not None:
        try:
            data = json.loads(Path(config_file).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config {config_file}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"{config_file}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise UsageError(f"{config_file}: expected a JSON object")
        data = data.get("parameters", data)
        data.pop("family", None)
        given.update(data)
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        given[key.strip()] = _parse_value(value.strip())
    unknown = sorted(set(given) - set(schema))
    if unknown:
        raise UsageError(f"unknown parameter(s) for {family}: {', '.join(unknown)}; "
                         f"allowed: {', '.join(sorted(schema))}")
    out = {}
    for key, (kind, default) in schema.items():
        value = given.get(key, default)
        if value is not None:
            if kind is int and (isinstance(value, bool) or float(value) != int(float(value))):
                raise UsageError(f"{key} must be an integer, got {value!r}")
            try:
                value = kind(value)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"{key}: cannot convert {value!r} to {kind.__name__}") from exc
        out[key] = value
    return out


def _mode_config(p: dict) -> SpectralModeConfig:
    return SpectralModeConfig(p["n_modes"], p["mode_spacing"], p["mode_width"], p.get("center_frequency", 0.0))


def _tau_args(p: dict):
    return p["tau_min"], p["tau_max"], p["n_samples"]


def _tabulated_curve(family: str, p: dict, path) -> PatternCurve:
    mode = load_tabulated(path)
    tau = np.linspace(*_tau_args(p))
    values = tabulated_probability(mode, family, p["n_modes"], p["mode_spacing"], tau, p["center_frequency"])
    cfg = _mode_config(p)
    return PatternCurve(tau, np.clip(values, 0.0, 1.0), Family(family), cfg, {"tabulated_file": str(path)})


def _emit_curve(out: Path, stem: str, formats, x, columns: dict, header: dict, labels, summary: dict):
    paths = []
    if "csv" in formats:
        paths.append(write_csv(out / f"{stem}.csv", {labels[0]: x, **columns}, header))
    if "svg" in formats:
        paths.append(svg.line_plot(out / f"{stem}.svg", x, columns, stem, labels[0], labels[1]))
    if "json" in formats:
        paths.append(write_json(out / f"{stem}.json", {**header, **summary}))
    return paths


def run_family(family: str, params: dict, out: Path, formats, seed: int, tabulated=None) -> list[Path]:
    header = {"family": family, "parameters": params}
    if tabulated is not None and family not in ("homi", "mzi", "noon"):
        raise UsageError("--tabulated applies to homi, mzi and noon only")
    if family in ("homi", "mzi", "noon"):
        if tabulated is not None:
            curve = _tabulated_curve(family, params, tabulated)
        elif family == "homi":
            curve = homi_pattern(_mode_config(params), *_tau_args(params))
        elif family == "noon":
            curve = noon_pattern(_mode_config(params), *_tau_args(params))
        else:
            cfg = SingleSpectrumConfig(params["n_modes"], params["mode_spacing"], params["mode_width"],
                                       params["center_frequency"])
            curve = mzi_pattern(cfg, *_tau_args(params))
        summary = {"min": float(curve.values.min()), "max": float(curve.values.max()), **curve.metadata}
        return _emit_curve(out, family, formats, curve.abscissa, {"probability": curve.values},
                           {**header, "metadata": curve.metadata}, ("tau_ps", "P"), summary)
    if family == "msi":
        cfg = SlitConfig(params["n_slits"], params["slit_width"], params["slit_pitch"], params["wavelength"])
        curve = msi_pattern(cfg, params["sin_theta_min"], params["sin_theta_max"], params["n_samples"])
        summary = {"max": float(curve.values.max())}
        return _emit_curve(out, family, formats, curve.abscissa, {"intensity": curve.values},
                           header, ("sin_theta", "I"), summary)
    if family == "fisher":
        cfg = _mode_config(params)
        fc = fisher_curve(cfg, *_tau_args(params))
        tau_star, fi_max = max_fisher(cfg)
        summary = {"tau_star_ps": tau_star, "fi_max": fi_max}
        if params["crlb_trials"] > 0:
            true_tau = params["true_tau"]
            if true_tau is None:
                raise UsageError("crlb_trials needs true_tau")
            rep = crlb_monte_carlo(cfg, true_tau, params["crlb_measurements"], params["crlb_trials"], seed)
            summary["crlb"] = {**rep.__dict__, "seed": seed, "efficiency_ratio": rep.efficiency_ratio}
        return _emit_curve(out, family, formats, fc.tau_grid, {"fisher_information": fc.fi_values},
                           header, ("tau_ps", "FI_ps^-2"), summary)
    if family == "fit":
        fit = sqrt_fi_vs_n_fit(params["alpha"], params["gamma"], range(params["n_min"], params["n_max"] + 1))
        n = np.array(fit.n_values, dtype=float)
        summary = {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared,
                   "max_relative_residual": float(np.max(fit.relative_residuals()))}
        return _emit_curve(out, family, formats, n,
                           {"sqrt_fi_max": fit.sqrt_fi_max, "linear_fit": fit.slope * n + fit.intercept},
                           header, ("n_modes", "sqrt_fi_max"), summary)
    raise UsageError(f"unknown family {family}")


def _formats(text: str) -> tuple[str, ...]:
    items = tuple(dict.fromkeys(s.strip() for s in text.split(",") if s.strip()))
    bad = [s for s in items if s not in FORMATS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interfero",
        description="Multi-mode interference patterns, Fisher information and figure reproduction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "target",
        choices=[*PARAMETERS, *FIGURES],
        help="pattern family, analysis (fisher, fit), validate, or a figure id",
    )
    parser.add_argument("--config", type=Path, help="JSON file with parameters")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    parser.add_argument("--format", type=_formats, default=("csv", "svg"),
                        help="comma-separated subset of csv,json,svg (default: csv,svg)")
    parser.add_argument("--seed", type=int, default=0, help="seed for Monte Carlo runs (default: 0)")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="override one parameter; repeatable")
    parser.add_argument("--tabulated", type=Path,
                        help="tabulated single-mode f0 for homi, mzi or noon")
    parser.add_argument("--profile", choices=PROFILES, help="validation tolerance profile")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.target in FIGURES:
            if args.config or args.param:
                raise UsageError("figures use fixed parameter sets; --config and --param do not apply")
            paths = run_figure(args.target, args.out, args.format)
        elif args.target == "validate":
            overrides = list(args.param) + ([f"profile={args.profile}"] if args.profile else [])
            params = resolve_parameters("validate", args.config, overrides)
            if params["profile"] not in PROFILES:
                raise UsageError(f"profile must be one of {', '.join(PROFILES)}")
            rep = report(run_checks(params["profile"]), params["profile"])
            path = write_json(args.out / "validation_report.json", rep)
            sys.stdout.write(dumps(rep["summary"]))
            print(path)
            return 0 if rep["summary"]["all_passed"] else 1
        else:
            params = resolve_parameters(args.target, args.config, args.param)
            paths = run_family(args.target, params, args.out, args.format, args.seed, args.tabulated)
    except (UsageError, ValueError) as exc:
        print(f"interfero: error: {exc}", file=sys.stderr)
        return 2
    except OutputError as exc:
        print(f"interfero: error: {exc}", file=sys.stderr)
        return 3
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
