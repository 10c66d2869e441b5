import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from ..core.errors import ConfigError, FreeBoundaryError
from ..core.params import FluidParams, PRESETS, validate_params

SCHEMA_VERSION = 1

COMMAND_DEFAULTS = {
    "k-profile": {
        "rays": 9,
        "theta": 3*math.pi/4,
        "z_min": 1e-6,
        "z_max": 1e8,
        "per_decade": 8,
        "k0_tol": 1e-4,
        "zk_inf_tol": 1e-3},
    "dispersion": {
        "tau_grid": None,
        "tau_min": 0.05,
        "tau_max": 2.0,
        "n_tau": 40,
        "count_zeros": True},
    "verify-bounds": {
        "lambda0": None,
        "eta": 0.1,
        "beta": 1.0,
        "delta": 0.5,
        "lambda_max": 1e4,
        "tau_min": 1e-3,
        "tau_max": 1e3,
        "per_decade": 24,
        "n_rays": 9,
        "n_zeta": 5,
        "points": False},
    "mode-response": {
        "tau": 0.5,
        "times": None,
        "t_end": None,
        "n_times": 60,
        "nodes": 24},
    "kernel-check": {
        "m": 128,
        "n": 1,
        "frechet_m": 32,
        "levels": 12,
        "dy": 0.1,
        "kernels": None,
        "jvp": True},
    "norms": {
        "m": 256,
        "box": 8.0,
        "s": 0.5,
        "p": 2.0,
        "bumps": 10,
        "epsilon": 1.0,
        "hardy_m": 256}}


@dataclass
class RunConfig:
    """
    Fully resolved run: defaults < JSON config file < command-line flags.
    """
    command: str
    params: FluidParams = field(default_factory=lambda: PRESETS["rt"])
    seed: int = 0
    threads: int = 1
    out: str = "."
    options: dict = field(default_factory=dict)

    def to_dict(self):
        # `out` is left out so that runs into different directories agree byte for byte
        return {
            "command": self.command,
            "params": self.params.to_dict(),
            "seed": self.seed,
            "threads": self.threads,
            "options": copy.deepcopy(self.options)}


def _params(base, preset, overrides, where):
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"{where}: unknown preset {preset!r}, expected one of {sorted(PRESETS)}")
        base = PRESETS[preset]
    if overrides:
        try:
            base = base.replace(**{k: float(v) for (k, v) in overrides.items()})
        except TypeError as e:
            raise ConfigError(f"{where}: bad parameter override {overrides}: {e}")
    return base


def _options(command, options, where):
    unknown = set(options) - set(COMMAND_DEFAULTS[command])
    if unknown:
        raise ConfigError(f"{where}: unrecognized options {sorted(unknown)} for {command}")
    return options


def load_config_file(path):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"load_config_file: cannot read {path}: {e}")
    if not isinstance(doc, dict):
        raise ConfigError(f"load_config_file: {path} does not hold a JSON object")
    unknown = set(doc) - {"preset", "params", "seed", "threads", "options"}
    if unknown:
        raise ConfigError(f"load_config_file: unrecognized keys {sorted(unknown)}")
    return doc


def resolve_config(command, config_path=None, preset=None, params=None, seed=None, threads=None, out=None, options=None):
    """
    Merge a JSON config file and flag values over the command defaults and
    validate the physical parameters.
    """
    if command not in COMMAND_DEFAULTS:
        raise ConfigError(f"resolve_config: unknown command {command!r}")
    doc = load_config_file(config_path) if config_path is not None else {}
    p = _params(PRESETS["rt"], doc.get("preset"), doc.get("params"), "config file")
    p = _params(p, preset, params, "flags")
    try:
        validate_params(p)
    except FreeBoundaryError as e:
        raise ConfigError(str(e))
    merged = dict(COMMAND_DEFAULTS[command])
    merged.update(_options(command, doc.get("options", {}), "config file"))
    merged.update(_options(command, options or {}, "flags"))
    config = RunConfig(
        command=command,
        params=p,
        seed=int(seed if seed is not None else doc.get("seed", 0)),
        threads=int(threads if threads is not None else doc.get("threads", 1)),
        out=str(out if out is not None else "."),
        options=merged)
    if config.threads < 1:
        raise ConfigError(f"resolve_config: threads = {config.threads} must be at least 1")
    return config
