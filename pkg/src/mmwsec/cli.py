"""Batch experiment runner.

A strict JSON config (or a named preset) in; a deterministic CSV/JSON table,
a metadata sidecar, and an optional SVG plot out. Angles are degrees at this
layer; every angle column ends in _deg, rates are bits per channel use
(_bits), pattern columns are dB (_db). The table bytes depend only on the
resolved config and seed; the timestamp lives in the sidecar.

Exit codes: 0 success, 2 config validation failure (field diagnostic on
stderr), 3 numerical failure (names the module).
"""

from __future__ import annotations

import argparse
import copy
import datetime
import json
import sys
import time
from pathlib import Path

import numpy as np
from scipy import stats as sstats

from . import __version__
from . import rng as rngmod
from .an_precoding import (
    DegenerateSectorsError,
    MultisectorSector,
    SectorSet,
    SingularGramError,
    combined_precoder,
    matched_filter,
    multisector_precoder,
    noise_beam,
)
from .arrays import ArrayConfig, Scenario, vehicular_scenario
from .hybrid import DictionaryOverflowError, build_dictionary, omp_factorize
from .montecarlo import McConfig, mc_beta_cdf, mc_secrecy_analog, mc_secrecy_hybrid
from .secrecy import analog_secrecy_bound
from .subset_jam import beta_stats_closed_form, pattern_value
from .svgplot import line_plot

KINDS = ("pattern", "lemma1", "sweep-theta", "sweep-m", "sweep-eps", "codebook", "multisector")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


# ---------------------------------------------------------------------------
# config validation


def _check_keys(d: dict, allowed: set[str], path: str) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", "unknown key")


def _get(d: dict, key: str, types, path: str, default=None, required: bool = False):
    if key not in d or d[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", "required field is missing")
        return copy.deepcopy(default)
    v = d[key]
    if types is float and isinstance(v, int) and not isinstance(v, bool):
        v = float(v)
    if not isinstance(v, types) or isinstance(v, bool) and types is not bool:
        raise ConfigError(f"{path}.{key}", f"expected {types}, got {type(v).__name__}")
    return v


ARRAY_DEFAULTS = {"n_antennas": 32, "spacing_ratio": 0.5, "n_rf": 1, "phase_bits": 6, "group_size": None}
SCENARIO_DEFAULTS = {
    "tx_power_dbm": 37.0,
    "frequency_ghz": 60.0,
    "bandwidth_mhz": 50.0,
    "noise_figure_db": 0.0,
    "noise_dbm": None,
    "rx_distance_m": 50.0,
    "ev_distance_m": 10.0,
    "n_rx_antennas": 16,
    "n_ev_antennas": 500,
    "theta_rx_deg": 120.0,
    "ev_gain_model": "gaussian",
}
MC_DEFAULTS = {"n_trials": 4000, "seed": 12345, "lanes": 1}
OUTPUT_DEFAULTS = {"path": None, "format": "csv", "svg": None}

KIND_KEYS = {
    "pattern": {"sectors", "epsilon", "n_directions"},
    "lemma1": {"subset_size", "theta_deg", "sign_model"},
    "sweep-theta": {
        "technique", "subset_size", "epsilon", "sectors", "theta_grid_deg",
        "n_directions", "include_hybrid", "sign_model",
    },
    "sweep-m": {"m_grid", "theta_grid_deg", "sign_model"},
    "sweep-eps": {"theta_deg", "injections", "epsilon_grid", "n_directions", "include_hybrid"},
    "codebook": {"sectors", "epsilon", "n_directions"},
    "multisector": {"sectors", "n_directions", "n_draws"},
}
COMMON_KEYS = {"kind", "array", "scenario", "mc", "output"}


def _resolve_section(raw: dict, defaults: dict, path: str) -> dict:
    _check_keys(raw, set(defaults), path)
    out = copy.deepcopy(defaults)
    out.update({k: v for k, v in raw.items() if v is not None})
    return out


def _resolve_grid(raw, default: dict, path: str) -> dict | list:
    """A grid is {"start", "stop", "step", optional "exclude"} or an explicit list."""
    if raw is None:
        return copy.deepcopy(default)
    if isinstance(raw, list):
        if not raw or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
            raise ConfigError(path, "grid list must hold numbers")
        return [float(v) for v in raw]
    if isinstance(raw, dict):
        _check_keys(raw, {"start", "stop", "step", "exclude"}, path)
        out = {
            "start": _get(raw, "start", float, path, required=True),
            "stop": _get(raw, "stop", float, path, required=True),
            "step": _get(raw, "step", float, path, required=True),
            "exclude": [float(v) for v in _get(raw, "exclude", list, path, default=[])],
        }
        if out["step"] <= 0 or out["stop"] < out["start"]:
            raise ConfigError(path, "need step > 0 and stop >= start")
        return out
    raise ConfigError(path, "expected a grid object or a list of values")


def _grid_values(grid: dict | list) -> np.ndarray:
    if isinstance(grid, list):
        return np.asarray(grid, dtype=float)
    n = int(round((grid["stop"] - grid["start"]) / grid["step"])) + 1
    vals = grid["start"] + grid["step"] * np.arange(n)
    vals = vals[vals <= grid["stop"] + 1e-9]
    keep = ~np.any(np.abs(vals[:, None] - np.asarray(grid["exclude"])[None, :]) < 1e-9, axis=1) \
        if grid["exclude"] else np.ones(len(vals), bool)
    return vals[keep]


def _resolve_sectors(raw, path: str, allow_omni: bool = True):
    """"omni" | {"half_width_deg": x} | [[lo_deg, hi_deg], ...] -> resolved form."""
    if raw == "omni":
        if not allow_omni:
            raise ConfigError(path, '"omni" is not valid here')
        return "omni"
    if isinstance(raw, dict):
        _check_keys(raw, {"half_width_deg"}, path)
        hw = _get(raw, "half_width_deg", float, path, required=True)
        if hw <= 0:
            raise ConfigError(f"{path}.half_width_deg", "must be positive")
        return {"half_width_deg": hw}
    if isinstance(raw, list) and raw:
        out = []
        for i, iv in enumerate(raw):
            if not (isinstance(iv, list) and len(iv) == 2):
                raise ConfigError(f"{path}[{i}]", "expected [lo_deg, hi_deg]")
            lo, hi = float(iv[0]), float(iv[1])
            if not 0.0 <= lo < hi <= 180.0:
                raise ConfigError(f"{path}[{i}]", "need 0 <= lo < hi <= 180")
            out.append([lo, hi])
        return out
    raise ConfigError(path, 'expected "omni", {"half_width_deg": x} or [[lo, hi], ...]')


def _build_sector_set(resolved, theta_rx: float) -> SectorSet:
    if resolved == "omni":
        return SectorSet.omni_excluding(theta_rx)
    if isinstance(resolved, dict):
        return SectorSet.around(theta_rx, np.radians(resolved["half_width_deg"]))
    return SectorSet(intervals=tuple((np.radians(lo), np.radians(hi)) for lo, hi in resolved))


def _check_parity(n_antennas: int, m: int, path: str) -> None:
    if not 1 <= m <= n_antennas:
        raise ConfigError(path, f"subset size must be in [1, {n_antennas}]")
    if (n_antennas - m) % 2 != 0:
        raise ConfigError(
            path,
            f"parity rule violated: n_antennas - subset_size must be even so the "
            f"destructive antennas pair up (got {n_antennas} - {m} = {n_antennas - m})",
        )


def resolve_config(raw: dict) -> dict:
    """Validate a raw config dict and fill defaults. Unknown keys are errors."""
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be an object")
    kind = _get(raw, "kind", str, "config", required=True)
    if kind not in KINDS:
        raise ConfigError("config.kind", f"unknown kind {kind!r}, expected one of {KINDS}")
    _check_keys(raw, COMMON_KEYS | KIND_KEYS[kind], "config")

    res = {"kind": kind}
    res["array"] = _resolve_section(raw.get("array", {}), ARRAY_DEFAULTS, "config.array")
    res["scenario"] = _resolve_section(raw.get("scenario", {}), SCENARIO_DEFAULTS, "config.scenario")
    res["mc"] = _resolve_section(raw.get("mc", {}), MC_DEFAULTS, "config.mc")
    res["output"] = _resolve_section(raw.get("output", {}), OUTPUT_DEFAULTS, "config.output")
    if res["output"]["format"] not in ("csv", "json"):
        raise ConfigError("config.output.format", 'expected "csv" or "json"')
    if res["scenario"]["ev_gain_model"] not in ("fixed", "gaussian"):
        raise ConfigError("config.scenario.ev_gain_model", 'expected "fixed" or "gaussian"')

    n_t = res["array"]["n_antennas"]
    theta_rx_deg = res["scenario"]["theta_rx_deg"]

    if kind == "lemma1":
        res["subset_size"] = _get(raw, "subset_size", int, "config", required=True)
        _check_parity(n_t, res["subset_size"], "config.subset_size")
        res["theta_deg"] = _get(raw, "theta_deg", float, "config", required=True)
        res["sign_model"] = _get(raw, "sign_model", str, "config", default="iid-sign")
    elif kind == "sweep-theta":
        technique = _get(raw, "technique", str, "config", required=True)
        if technique not in ("analog", "hybrid"):
            raise ConfigError("config.technique", 'expected "analog" or "hybrid"')
        res["technique"] = technique
        res["theta_grid_deg"] = _resolve_grid(
            raw.get("theta_grid_deg"),
            {"start": 1.0, "stop": 179.0, "step": 1.0, "exclude": [theta_rx_deg]},
            "config.theta_grid_deg",
        )
        if technique == "analog":
            res["subset_size"] = _get(raw, "subset_size", int, "config", required=True)
            _check_parity(n_t, res["subset_size"], "config.subset_size")
            res["sign_model"] = _get(raw, "sign_model", str, "config", default="iid-sign")
        else:
            res["epsilon"] = _get(raw, "epsilon", float, "config", required=True)
            res["sectors"] = _resolve_sectors(raw.get("sectors", "omni"), "config.sectors")
            res["n_directions"] = _get(raw, "n_directions", int, "config", default=360)
            res["include_hybrid"] = _get(raw, "include_hybrid", bool, "config", default=True)
    elif kind == "sweep-m":
        default_m = [m for m in range(2, n_t + 1) if (n_t - m) % 2 == 0]
        m_grid = _get(raw, "m_grid", list, "config", default=default_m)
        for i, m in enumerate(m_grid):
            if not isinstance(m, int) or isinstance(m, bool):
                raise ConfigError(f"config.m_grid[{i}]", "expected an integer")
            _check_parity(n_t, m, f"config.m_grid[{i}]")
        res["m_grid"] = m_grid
        res["theta_grid_deg"] = _resolve_grid(
            raw.get("theta_grid_deg"),
            {"start": 110.0, "stop": 130.0, "step": 1.0, "exclude": [theta_rx_deg]},
            "config.theta_grid_deg",
        )
        res["sign_model"] = _get(raw, "sign_model", str, "config", default="iid-sign")
    elif kind == "sweep-eps":
        res["theta_deg"] = _get(raw, "theta_deg", float, "config", required=True)
        res["epsilon_grid"] = _resolve_grid(
            raw.get("epsilon_grid"),
            {"start": 0.05, "stop": 0.95, "step": 0.05, "exclude": []},
            "config.epsilon_grid",
        )
        injections = _get(raw, "injections", list, "config",
                          default=[{"label": "omni", "sectors": "omni"}])
        res["injections"] = []
        labels = set()
        for i, inj in enumerate(injections):
            if not isinstance(inj, dict):
                raise ConfigError(f"config.injections[{i}]", "expected an object")
            _check_keys(inj, {"label", "sectors"}, f"config.injections[{i}]")
            label = _get(inj, "label", str, f"config.injections[{i}]", required=True)
            if label in labels:
                raise ConfigError(f"config.injections[{i}].label", f"duplicate label {label!r}")
            labels.add(label)
            res["injections"].append({
                "label": label,
                "sectors": _resolve_sectors(inj.get("sectors", "omni"),
                                            f"config.injections[{i}].sectors"),
            })
        res["n_directions"] = _get(raw, "n_directions", int, "config", default=360)
        res["include_hybrid"] = _get(raw, "include_hybrid", bool, "config", default=True)
    elif kind in ("pattern", "codebook"):
        res["sectors"] = _resolve_sectors(raw.get("sectors", "omni"), "config.sectors")
        res["epsilon"] = _get(raw, "epsilon", float, "config", default=0.5)
        res["n_directions"] = _get(raw, "n_directions", int, "config", default=360)
    elif kind == "multisector":
        sectors = _get(raw, "sectors", list, "config", required=True)
        res["sectors"] = []
        for i, s in enumerate(sectors):
            path = f"config.sectors[{i}]"
            if not isinstance(s, dict):
                raise ConfigError(path, "expected an object")
            _check_keys(s, {"lo_deg", "hi_deg", "power", "receiver"}, path)
            res["sectors"].append({
                "lo_deg": _get(s, "lo_deg", float, path, required=True),
                "hi_deg": _get(s, "hi_deg", float, path, required=True),
                "power": _get(s, "power", float, path, required=True),
                "receiver": _get(s, "receiver", bool, path, default=False),
            })
        res["n_directions"] = _get(raw, "n_directions", int, "config", default=360)
        res["n_draws"] = _get(raw, "n_draws", int, "config", default=1)

    for key in ("epsilon",):
        if key in res and not 0.0 <= res[key] <= 1.0:
            raise ConfigError(f"config.{key}", "must be in [0, 1]")
    if "sign_model" in res and res["sign_model"] not in ("iid-sign", "partition"):
        raise ConfigError("config.sign_model", 'expected "iid-sign" or "partition"')
    return res


def _array_config(res: dict) -> ArrayConfig:
    a = res["array"]
    try:
        return ArrayConfig(
            n_antennas=a["n_antennas"],
            spacing_ratio=a["spacing_ratio"],
            n_rf=a["n_rf"],
            phase_bits=a["phase_bits"],
            group_size=a["group_size"],
        )
    except ValueError as exc:
        raise ConfigError("config.array", str(exc)) from exc


def _scenario(res: dict) -> Scenario:
    s = res["scenario"]
    try:
        scn = vehicular_scenario(
            tx_power_dbm=s["tx_power_dbm"],
            frequency_hz=s["frequency_ghz"] * 1e9,
            bandwidth_hz=s["bandwidth_mhz"] * 1e6,
            rx_distance=s["rx_distance_m"],
            ev_distance=s["ev_distance_m"],
            n_rx_antennas=s["n_rx_antennas"],
            n_ev_antennas=s["n_ev_antennas"],
            theta_rx=np.radians(s["theta_rx_deg"]),
            ev_gain_model=s["ev_gain_model"],
            noise_figure_db=s["noise_figure_db"],
        )
        if s["noise_dbm"] is not None:
            noise = 10.0 ** ((s["noise_dbm"] - 30.0) / 10.0)
            scn = Scenario(
                tx_power=scn.tx_power,
                path_loss_rx=scn.path_loss_rx,
                path_loss_ev=scn.path_loss_ev,
                noise_rx=noise,
                noise_ev=noise,
                n_rx_antennas=scn.n_rx_antennas,
                n_ev_antennas=scn.n_ev_antennas,
                theta_rx=scn.theta_rx,
                ev_gain_model=scn.ev_gain_model,
            )
        return scn
    except ValueError as exc:
        raise ConfigError("config.scenario", str(exc)) from exc


def _mc(res: dict) -> McConfig:
    m = res["mc"]
    try:
        return McConfig(n_trials=m["n_trials"], seed=m["seed"], lanes=m["lanes"])
    except ValueError as exc:
        raise ConfigError("config.mc", str(exc)) from exc


# ---------------------------------------------------------------------------
# experiment runners: (columns, rows, meta_extras, plot spec)


def _db(power: np.ndarray | float, floor: float = 1e-10) -> np.ndarray | float:
    return 10.0 * np.log10(np.maximum(power, floor))


def _pattern_curve(cfg, weights, thetas_deg):
    return np.array([abs(pattern_value(cfg, weights, np.radians(t))) ** 2 for t in thetas_deg])


def run_lemma1(res: dict):
    cfg = _array_config(res)
    scn_theta_rx = np.radians(res["scenario"]["theta_rx_deg"])
    theta = np.radians(res["theta_deg"])
    out = mc_beta_cdf(cfg, res["subset_size"], theta, scn_theta_rx, _mc(res), res["sign_model"])
    lo = min(out.real_sorted[0], out.imag_sorted[0])
    hi = max(out.real_sorted[-1], out.imag_sorted[-1])
    xs = np.linspace(lo, hi, 201)
    n = len(out.real_sorted)
    cdf_re = np.searchsorted(out.real_sorted, xs, side="right") / n
    cdf_im = np.searchsorted(out.imag_sorted, xs, side="right") / n
    th_re = sstats.norm.cdf(xs, out.closed_form_mean.real, np.sqrt(out.closed_form_var_real))
    th_im = sstats.norm.cdf(xs, 0.0, np.sqrt(out.closed_form_var_imag))
    columns = ["x", "cdf_real_emp", "cdf_real_theory", "cdf_imag_emp", "cdf_imag_theory"]
    rows = list(zip(xs, cdf_re, th_re, cdf_im, th_im))
    meta = {
        "ks_real": out.ks_real,
        "ks_imag": out.ks_imag,
        "imag_mean": out.imag_mean.estimate,
        "imag_mean_std_error": out.imag_mean.std_error,
        "closed_form_mean_real": out.closed_form_mean.real,
        "closed_form_var_real": out.closed_form_var_real,
        "closed_form_var_imag": out.closed_form_var_imag,
    }
    plot = ("x", xs, {
        "cdf_real_emp": cdf_re, "cdf_real_theory": th_re,
        "cdf_imag_emp": cdf_im, "cdf_imag_theory": th_im,
    }, "CDF", False)
    return columns, rows, meta, plot


def run_sweep_theta(res: dict):
    cfg, scn, mc = _array_config(res), _scenario(res), _mc(res)
    thetas_deg = _grid_values(res["theta_grid_deg"])
    thetas = np.radians(thetas_deg)
    if res["technique"] == "analog":
        m = res["subset_size"]
        sim = mc_secrecy_analog(scn, cfg, m, thetas, mc, res["sign_model"])
        conv = mc_secrecy_analog(scn, cfg, cfg.n_antennas, thetas, mc, res["sign_model"])
        bounds = [analog_secrecy_bound(scn, cfg, m, t).rate_lower_bound for t in thetas]
        columns = ["theta_deg", "rate_sim_bits", "rate_sim_se_bits",
                   "rate_bound_bits", "rate_conventional_bits"]
        rows = [
            (td, r.estimate, r.std_error, b, c.estimate)
            for td, r, b, c in zip(thetas_deg, sim, bounds, conv)
        ]
        meta = {"technique": "analog", "subset_size": m}
        plot = ("eavesdropper angle [deg]", thetas_deg, {
            "simulated": [r.estimate for r in sim],
            "lower bound": bounds,
            "conventional": [c.estimate for c in conv],
        }, "secrecy rate [bits/use]", False)
        return columns, rows, meta, plot

    sectors = _build_sector_set(res["sectors"], scn.theta_rx)
    n_rf = cfg.n_rf if res["include_hybrid"] else None
    sweep = mc_secrecy_hybrid(
        scn, cfg, sectors, mc, theta_grid=thetas, epsilon=res["epsilon"],
        n_rf=n_rf, n_directions=res["n_directions"],
    )
    columns = ["theta_deg", "rate_digital_bits", "rate_digital_se_bits", "rate_bound_bits"]
    series = {"digital": [r.estimate for r in sweep.digital],
              "lower bound": [r.extras["rate_lower_bound"] for r in sweep.digital]}
    if sweep.hybrid is not None:
        columns += ["rate_hybrid_bits", "rate_hybrid_se_bits"]
        series["hybrid"] = [r.estimate for r in sweep.hybrid]
    rows = []
    for i, td in enumerate(thetas_deg):
        row = [td, sweep.digital[i].estimate, sweep.digital[i].std_error,
               sweep.digital[i].extras["rate_lower_bound"]]
        if sweep.hybrid is not None:
            row += [sweep.hybrid[i].estimate, sweep.hybrid[i].std_error]
        rows.append(tuple(row))
    meta = {"technique": "hybrid", "epsilon": res["epsilon"], "c0_measured": sweep.c0}
    if sweep.hp_s is not None:
        meta["omp_residual_data_beam"] = sweep.hp_s.residual_norm
        meta["omp_residual_noise_beam"] = sweep.hp_n.residual_norm
    plot = ("eavesdropper angle [deg]", thetas_deg, series, "secrecy rate [bits/use]", False)
    return columns, rows, meta, plot


def run_sweep_m(res: dict):
    cfg, scn, mc = _array_config(res), _scenario(res), _mc(res)
    thetas_deg = _grid_values(res["theta_grid_deg"])
    thetas = np.radians(thetas_deg)
    conv = mc_secrecy_analog(scn, cfg, cfg.n_antennas, thetas, mc, res["sign_model"])
    conv_rate = float(np.mean([r.estimate for r in conv]))
    rows, sim_curve, bound_curve = [], [], []
    for m in res["m_grid"]:
        sim = mc_secrecy_analog(scn, cfg, m, thetas, mc, res["sign_model"])
        est = float(np.mean([r.estimate for r in sim]))
        se = float(np.sqrt(np.mean([r.std_error**2 for r in sim]) / len(sim)))
        bound = float(np.mean(
            [analog_secrecy_bound(scn, cfg, m, t).rate_lower_bound for t in thetas]
        ))
        rows.append((m, est, se, bound, conv_rate))
        sim_curve.append(est)
        bound_curve.append(bound)
    columns = ["M", "rate_sim_bits", "rate_sim_se_bits", "rate_bound_bits",
               "rate_conventional_bits"]
    meta = {"theta_grid_deg": [float(t) for t in thetas_deg]}
    plot = ("subset size M", [r[0] for r in rows], {
        "simulated": sim_curve, "lower bound": bound_curve,
        "conventional": [conv_rate] * len(rows),
    }, "secrecy rate [bits/use]", False)
    return columns, rows, meta, plot


def run_sweep_eps(res: dict):
    cfg, scn, mc = _array_config(res), _scenario(res), _mc(res)
    eps_grid = _grid_values(res["epsilon_grid"])
    theta = np.radians(res["theta_deg"])
    n_rf = cfg.n_rf if res["include_hybrid"] else None
    columns = ["eps"]
    series, meta = {}, {}
    per_label_rows = []
    for inj in res["injections"]:
        label = inj["label"]
        sectors = _build_sector_set(inj["sectors"], scn.theta_rx)
        sweep = mc_secrecy_hybrid(
            scn, cfg, sectors, mc, epsilon_grid=eps_grid, theta=theta,
            n_rf=n_rf, n_directions=res["n_directions"],
        )
        cols = {
            f"rate_{label}_digital_bits": [r.estimate for r in sweep.digital],
            f"rate_{label}_digital_se_bits": [r.std_error for r in sweep.digital],
            f"rate_{label}_bound_bits": [r.extras["rate_lower_bound"] for r in sweep.digital],
        }
        series[f"{label} digital"] = cols[f"rate_{label}_digital_bits"]
        if sweep.hybrid is not None:
            cols[f"rate_{label}_hybrid_bits"] = [r.estimate for r in sweep.hybrid]
            cols[f"rate_{label}_hybrid_se_bits"] = [r.std_error for r in sweep.hybrid]
            series[f"{label} hybrid"] = cols[f"rate_{label}_hybrid_bits"]
        meta[f"c0_measured_{label}"] = sweep.c0
        per_label_rows.append(cols)
        columns += list(cols)
    rows = []
    for i, e in enumerate(eps_grid):
        row = [e]
        for cols in per_label_rows:
            row += [vals[i] for vals in cols.values()]
        rows.append(tuple(row))
    plot = ("data power fraction eps", eps_grid, series, "secrecy rate [bits/use]", False)
    return columns, rows, meta, plot


def run_pattern(res: dict):
    cfg, scn = _array_config(res), _scenario(res)
    sectors = _build_sector_set(res["sectors"], scn.theta_rx)
    f_s = matched_filter(cfg, scn.theta_rx)
    f_n = noise_beam(cfg, scn.theta_rx, sectors, res["n_directions"])
    f_k = combined_precoder(f_s, f_n, res["epsilon"], 0, res["mc"]["seed"])
    thetas_deg = np.arange(0.0, 180.5, 1.0)
    p_s = _db(_pattern_curve(cfg, f_s, thetas_deg))
    p_n = _db(_pattern_curve(cfg, f_n, thetas_deg))
    p_c = _db(_pattern_curve(cfg, f_k, thetas_deg))
    columns = ["theta_deg", "pattern_data_db", "pattern_noise_db", "pattern_combined_db"]
    rows = list(zip(thetas_deg, p_s, p_n, p_c))
    plot = ("angle [deg]", thetas_deg, {
        "data beam": p_s, "noise beam": p_n, "combined": p_c,
    }, "gain [dB]", False)
    return columns, rows, {"epsilon": res["epsilon"]}, plot


def run_codebook(res: dict):
    cfg, scn = _array_config(res), _scenario(res)
    sectors = _build_sector_set(res["sectors"], scn.theta_rx)
    f_s = matched_filter(cfg, scn.theta_rx)
    f_n = noise_beam(cfg, scn.theta_rx, sectors, res["n_directions"])
    target = combined_precoder(f_s, f_n, res["epsilon"], 0, res["mc"]["seed"])
    dict_sw = build_dictionary(cfg, switching=True)
    dict_fx = build_dictionary(cfg, switching=False)
    hp_sw = omp_factorize(target, dict_sw, cfg.n_rf)
    hp_fx = omp_factorize(target, dict_fx, cfg.n_rf)
    thetas_deg = np.arange(0.0, 180.5, 1.0)
    p_d = _db(_pattern_curve(cfg, target, thetas_deg))
    p_sw = _db(_pattern_curve(cfg, hp_sw.reconstructed, thetas_deg))
    p_fx = _db(_pattern_curve(cfg, hp_fx.reconstructed, thetas_deg))
    columns = ["theta_deg", "pattern_digital_db", "pattern_hybrid_switch_db",
               "pattern_hybrid_fixed_db"]
    rows = list(zip(thetas_deg, p_d, p_sw, p_fx))
    meta = {
        "residual_switch": hp_sw.residual_norm,
        "residual_fixed": hp_fx.residual_norm,
        "dictionary_columns_switch": dict_sw.n_columns,
        "dictionary_columns_fixed": dict_fx.n_columns,
        "epsilon": res["epsilon"],
        "n_rf": cfg.n_rf,
    }
    plot = ("angle [deg]", thetas_deg, {
        "digital": p_d, "hybrid (switched)": p_sw, "hybrid (fixed)": p_fx,
    }, "gain [dB]", False)
    return columns, rows, meta, plot


def run_multisector(res: dict):
    cfg = _array_config(res)
    sectors = [
        MultisectorSector(
            lo=np.radians(s["lo_deg"]), hi=np.radians(s["hi_deg"]),
            power_fraction=s["power"], receiver=s["receiver"],
        )
        for s in res["sectors"]
    ]
    thetas_deg = np.arange(0.0, 180.5, 1.0)
    columns = ["theta_deg"]
    curves, meta = [], {}
    for draw in range(res["n_draws"]):
        rng = rngmod.stream(res["mc"]["seed"], rngmod.TARGET, draw)
        design = multisector_precoder(cfg, sectors, rng, res["n_directions"])
        curve = _db(_pattern_curve(cfg, design.weights, thetas_deg))
        curves.append(curve)
        columns.append(f"pattern_draw{draw}_db")
        meta[f"residual_draw{draw}"] = design.residual_norm
        meta[f"amplitudes_draw{draw}"] = list(design.amplitudes)
    rows = [tuple([thetas_deg[i]] + [c[i] for c in curves]) for i in range(len(thetas_deg))]
    plot = ("angle [deg]", thetas_deg,
            {f"draw {d}": curves[d] for d in range(len(curves))}, "gain [dB]", False)
    return columns, rows, meta, plot


RUNNERS = {
    "lemma1": run_lemma1,
    "sweep-theta": run_sweep_theta,
    "sweep-m": run_sweep_m,
    "sweep-eps": run_sweep_eps,
    "pattern": run_pattern,
    "codebook": run_codebook,
    "multisector": run_multisector,
}


# ---------------------------------------------------------------------------
# presets


PRESETS: dict[str, dict] = {
    "fig3": {
        "kind": "lemma1",
        "array": {"n_antennas": 64},
        "scenario": {"theta_rx_deg": 100.0},
        "subset_size": 48,
        "theta_deg": 60.0,
        "mc": {"n_trials": 100000},
    },
    "fig4": {
        "kind": "sweep-theta",
        "technique": "analog",
        "array": {"n_antennas": 32},
        "scenario": {"theta_rx_deg": 120.0},
        "subset_size": 12,
        "theta_grid_deg": {"start": 1.0, "stop": 179.0, "step": 1.0, "exclude": [120.0]},
        "mc": {"n_trials": 4000},
    },
    "fig5": {
        "kind": "sweep-m",
        "array": {"n_antennas": 32},
        "scenario": {"theta_rx_deg": 120.0},
        "theta_grid_deg": {"start": 110.0, "stop": 130.0, "step": 1.0, "exclude": [120.0]},
        "mc": {"n_trials": 4000},
    },
    "fig6": {
        "kind": "codebook",
        "array": {"n_antennas": 32, "n_rf": 8, "phase_bits": 8, "group_size": 8},
        "scenario": {"theta_rx_deg": 90.0},
        "sectors": [[0.0, 60.0], [120.0, 180.0]],
        "epsilon": 0.1,
        "n_directions": 360,
        "mc": {"n_trials": 1000},
    },
    "fig7": {
        "kind": "sweep-theta",
        "technique": "hybrid",
        "array": {"n_antennas": 32, "n_rf": 10, "phase_bits": 6, "group_size": 8},
        "scenario": {"theta_rx_deg": 120.0},
        "epsilon": 0.5,
        "sectors": "omni",
        "theta_grid_deg": {"start": 1.0, "stop": 179.0, "step": 1.0, "exclude": [120.0]},
        "mc": {"n_trials": 4000},
    },
    "fig8": {
        "kind": "sweep-eps",
        "array": {"n_antennas": 32, "n_rf": 10, "phase_bits": 6, "group_size": 8},
        "scenario": {"theta_rx_deg": 120.0},
        "theta_deg": 110.0,
        "injections": [{"label": "omni", "sectors": "omni"}],
        "epsilon_grid": {"start": 0.05, "stop": 0.95, "step": 0.05},
        "mc": {"n_trials": 4000},
    },
    "fig9": {
        "kind": "sweep-eps",
        "array": {"n_antennas": 32, "n_rf": 10, "phase_bits": 8, "group_size": 8},
        "scenario": {"theta_rx_deg": 120.0},
        "theta_deg": 110.0,
        "injections": [
            {"label": "omni", "sectors": "omni"},
            {"label": "sector60", "sectors": {"half_width_deg": 30.0}},
            {"label": "sector30", "sectors": {"half_width_deg": 15.0}},
        ],
        "epsilon_grid": {"start": 0.05, "stop": 0.95, "step": 0.05},
        "mc": {"n_trials": 4000},
    },
    "bf1": {
        "kind": "multisector",
        "array": {"n_antennas": 16, "n_rf": 2, "phase_bits": 2},
        "sectors": [
            {"lo_deg": 26.0, "hi_deg": 35.0, "power": 0.5, "receiver": True},
            {"lo_deg": 146.0, "hi_deg": 155.0, "power": 0.5, "receiver": True},
        ],
        "n_directions": 360,
        "n_draws": 1,
        "mc": {"n_trials": 1000},
    },
}

PRESET_FIGURES = {
    "fig3": "far-field gain CDF vs Gaussian fit (N_T=64, M=48)",
    "fig4": "analog secrecy rate vs eavesdropper angle (N_T=32, M=12)",
    "fig5": "analog secrecy rate vs subset size (N_T=32)",
    "fig6": "digital vs hybrid beam patterns (N_T=32, 8 RF chains, 8-bit)",
    "fig7": "injection secrecy rate vs eavesdropper angle (10 RF chains, 6-bit)",
    "fig8": "injection secrecy rate vs power fraction (omnidirectional)",
    "fig9": "sector-confined vs omnidirectional injection rate vs power fraction",
    "bf1": "two-sector broadcast pattern (N_T=16, 2 RF chains, 2-bit)",
}


def list_presets() -> list[dict]:
    """Stable preset table: name, kind, and the figure each reproduces."""
    return [
        {"name": name, "kind": PRESETS[name]["kind"], "figure": PRESET_FIGURES[name]}
        for name in sorted(PRESETS)
    ]


# ---------------------------------------------------------------------------
# output writing


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.12g" % float(v)


def write_csv(path: Path, columns: list[str], rows: list[tuple]) -> None:
    lines = [",".join(columns)]
    lines += [",".join(_fmt_cell(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def write_json_table(path: Path, columns: list[str], rows: list[tuple], meta: dict) -> None:
    doc = {"meta": _jsonable(meta), "rows": [dict(zip(columns, _jsonable(list(r)))) for r in rows]}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="")


def run(config: dict, preset_name: str | None = None) -> tuple[int, list[Path]]:
    """Resolve, execute and write one experiment. Returns (exit code, files)."""
    t0 = time.monotonic()
    resolved = resolve_config(config)
    out_cfg = resolved["output"]
    fmt = out_cfg["format"]
    out_path = Path(out_cfg["path"] or f"{preset_name or resolved['kind']}.{fmt}")

    columns, rows, meta_extra, plot = RUNNERS[resolved["kind"]](resolved)

    meta = {
        "package": "mmwsec",
        "version": __version__,
        "preset": preset_name,
        "seed": resolved["mc"]["seed"],
        "config": resolved,
    }
    meta.update(meta_extra)

    written = []
    if fmt == "csv":
        write_csv(out_path, columns, rows)
    else:
        write_json_table(out_path, columns, rows, meta)
    written.append(out_path)

    sidecar = out_path.with_name(out_path.name + ".meta.json")
    side = dict(meta)
    side["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    side["runtime_seconds"] = round(time.monotonic() - t0, 3)
    sidecar.write_text(json.dumps(_jsonable(side), indent=2, sort_keys=True) + "\n",
                       encoding="utf-8", newline="")
    written.append(sidecar)

    if out_cfg["svg"]:
        xlabel, xs, series, ylabel, log_y = plot
        svg_path = Path(out_cfg["svg"])
        svg_path.write_text(
            line_plot([float(v) for v in xs],
                      {k: [float(v) for v in vals] for k, vals in series.items()},
                      xlabel, ylabel, title=preset_name or resolved["kind"], log_y=log_y),
            encoding="utf-8", newline="",
        )
        written.append(svg_path)
    return 0, written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mmwsec",
        description="Batch simulations for mmWave physical-layer security experiments.",
    )
    parser.add_argument("--config", type=Path, help="JSON experiment config")
    parser.add_argument("--preset", help="named preset (see --list-presets)")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", type=Path, help="output table path")
    parser.add_argument("--svg", type=Path, help="also write an SVG plot here")
    parser.add_argument("--format", choices=("csv", "json"), help="table format")
    parser.add_argument("--list-presets", action="store_true", help="list presets and exit")
    args = parser.parse_args(argv)

    if args.list_presets:
        rows = list_presets()
        width = max(len(r["name"]) for r in rows)
        for r in rows:
            print(f"{r['name']:<{width}}  {r['kind']:<12}  {r['figure']}")
        return 0

    if (args.config is None) == (args.preset is None):
        print("error: provide exactly one of --config or --preset", file=sys.stderr)
        return 2

    try:
        if args.preset is not None:
            if args.preset not in PRESETS:
                print(f"error: unknown preset {args.preset!r}; try --list-presets", file=sys.stderr)
                return 2
            config = copy.deepcopy(PRESETS[args.preset])
        else:
            try:
                config = json.loads(args.config.read_text(encoding="utf-8"))
            except FileNotFoundError:
                print(f"error: config file not found: {args.config}", file=sys.stderr)
                return 2
            except json.JSONDecodeError as exc:
                print(f"config error at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                      file=sys.stderr)
                return 2

        config.setdefault("mc", {})
        config.setdefault("output", {})
        if args.seed is not None:
            config["mc"]["seed"] = args.seed
        if args.out is not None:
            config["output"]["path"] = str(args.out)
        if args.svg is not None:
            config["output"]["svg"] = str(args.svg)
        if args.format is not None:
            config["output"]["format"] = args.format

        code, written = run(config, preset_name=args.preset)
        for p in written:
            print(f"wrote {p}")
        return code
    except ConfigError as exc:
        print(f"config error at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    except (SingularGramError, DegenerateSectorsError) as exc:
        print(f"numerical failure in module an_precoding: {exc}", file=sys.stderr)
        return 3
    except DictionaryOverflowError as exc:
        print(f"numerical failure in module hybrid: {exc}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure (linear algebra): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
