"""Declarative run configuration: TOML file plus key=value overrides.

Every parameter has a default; unknown sections or keys are rejected so a
typo cannot silently fall back to a default. The fully resolved dictionary
is echoed into each output directory for provenance.
"""

from __future__ import annotations

import ast
import copy
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .device import SweepConfig
from .ferroelectric import PreisachParams
from .gatestack import GateStack, default_stack
from .memarray import AccessParams, ArrayConfig
from .network import ImtParams
from .senseamp import CsaParams

EXPERIMENTS = ("iv_sweep", "characterize", "ratio_sweep", "threshold_dist",
               "array_demo", "array_exhaustive")

DEFAULTS: dict = {
    "run": {
        "experiment": "characterize",
        "seed": 0,
        "out_dir": "out",
    },
    "ferroelectric": {
        "p_s": 5.0, "p_r": 2.5, "v_c": 1.0, "t_fe": 10.0, "eps_fe": 10.0,
    },
    "imt": {
        "e_b": 0.55, "e_c": 0.73, "gamma": 0.18, "alpha": 0.5,
        "temperature": 300.0, "r_ins_mean": 3e6, "r_ins_sigma": 3e5,
        "r_met": 10.0,
    },
    "stack": {
        "t_il": 1.0, "eps_il": 3.9, "c_ch": 5.0,
    },
    "sweep": {
        "v_max": 2.2, "v_step": 0.05, "r_series": 5200.0,
        "k_quiet": 5, "max_steps": 10000, "jump_factor": 10.0,
    },
    "device": {
        "grid_rows": 20, "grid_cols": 20, "v_write": 7.0,
        "n_seeds": 25,
        "v_prog_list": [3.0, 4.0, 5.0, 7.0],
        "psi_list": [0.0, 0.1, 0.2, 0.3],
    },
    "array": {
        "rows": 3, "cols": 3, "v_dd": 1.2, "v_write": 7.0, "v_read": 1.25,
        "grid_rows": 20, "grid_cols": 20,
        "wlw_active": -1.0,   # <= 0 means derive as v_write + v_dd
        "wlw_inactive": 0.0,
    },
    "access": {
        "v_th": 0.4, "r_on": 1e4, "leakage": 100e-12,
    },
    "csa": {
        "i_ref": 10e-6, "v_dd": 1.2, "hysteresis_band": 0.1,
    },
}


class ConfigError(ValueError):
    """Unreadable, unknown, or ill-typed configuration input."""


def _merge(base: dict, incoming: dict, path: str = "") -> None:
    for key, value in incoming.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key: {where}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"expected a table for {where}")
            _merge(base[key], value, where + ".")
        else:
            if isinstance(base[key], bool) != isinstance(value, bool):
                raise ConfigError(f"bad type for {where}: {value!r}")
            if isinstance(base[key], (int, float)) and isinstance(value, (int, float)):
                base[key] = type(base[key])(value) if not isinstance(value, bool) else value
            elif type(base[key]) is type(value):
                base[key] = value
            else:
                raise ConfigError(
                    f"bad type for {where}: expected "
                    f"{type(base[key]).__name__}, got {type(value).__name__}")


def _parse_override(text: str) -> tuple[list[str], object]:
    if "=" not in text:
        raise ConfigError(f"override must look like section.key=value: {text!r}")
    key, raw = text.split("=", 1)
    parts = key.strip().split(".")
    if len(parts) != 2 or not all(parts):
        raise ConfigError(f"override key must be section.key: {key!r}")
    try:
        value = ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        value = raw
    return parts, value


def load_config(path: str | None = None, overrides: list[str] | None = None) -> dict:
    """Defaults, optionally updated from a TOML file, then from overrides."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config parse error in {path}: {exc}") from exc
        _merge(cfg, data)
    for text in overrides or []:
        (section, key), value = _parse_override(text)
        _merge(cfg, {section: {key: value}})
    if cfg["run"]["experiment"] not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {cfg['run']['experiment']!r}; "
            f"choose one of {', '.join(EXPERIMENTS)}")
    return cfg


# -- object builders -------------------------------------------------------

def fe_params(cfg: dict) -> PreisachParams:
    return PreisachParams(**cfg["ferroelectric"])


def imt_params(cfg: dict) -> ImtParams:
    return ImtParams(**cfg["imt"])


def sweep_config(cfg: dict) -> SweepConfig:
    return SweepConfig(**cfg["sweep"])


def stack_for(cfg: dict) -> GateStack:
    s = cfg["stack"]
    return default_stack(fe_params(cfg), t_il=s["t_il"], eps_il=s["eps_il"],
                         c_ch=s["c_ch"])


def access_params(cfg: dict) -> AccessParams:
    return AccessParams(**cfg["access"])


def csa_params(cfg: dict) -> CsaParams:
    return CsaParams(**cfg["csa"])


def array_config(cfg: dict) -> ArrayConfig:
    a = cfg["array"]
    return ArrayConfig(
        rows=a["rows"], cols=a["cols"], v_dd=a["v_dd"],
        v_write=a["v_write"], v_read=a["v_read"],
        access=access_params(cfg), imt=imt_params(cfg),
        sweep=sweep_config(cfg),
        grid_rows=a["grid_rows"], grid_cols=a["grid_cols"],
        wlw_active=None if a["wlw_active"] <= 0 else a["wlw_active"],
        wlw_inactive=a["wlw_inactive"],
        stack_template=stack_for(cfg),
    )
