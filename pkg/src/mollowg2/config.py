"""Run configuration: flat ``key = value`` files, command-line overrides, defaults."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .averaging import Sampled, Shell, Volume
from .physics import BandPair, DriveParams

COMMANDS = ("scan", "chi", "tau", "intensity", "scaling")
SCHEME_NAMES = ("shell", "volume", "sample")
FORMATS = ("csv", "json")
BAND_RESOLVED = ("scan", "chi", "tau", "scaling")


class ConfigError(ValueError):
    pass


def _str_tuple(text):
    items = tuple(t.strip() for t in text.split(",") if t.strip())
    if not items:
        raise ValueError("expected a comma-separated list")
    return items


def _int_tuple(text):
    return tuple(int(t) for t in _str_tuple(text))


def _opt_float(text):
    return None if text.strip() == "" else float(text)


_PARSERS = {
    "float": float,
    "int": int,
    "str": str.strip,
    "opt_float": _opt_float,
    "str_tuple": _str_tuple,
    "int_tuple": _int_tuple,
}


def _key(kind, default, help):
    return dataclasses.field(default=default, metadata={"kind": kind, "help": help})


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings. Angles are in degrees, delays in 1/gamma."""

    command: str = "scan"
    omega: float = _key("float", 10.0, "half Rabi frequency in units of gamma")
    delta: float = _key("float", 0.0, "detuning in units of gamma")
    pair: tuple = _key("str_tuple", ("CC",), "band pairs, e.g. CC,LR")
    scheme: tuple = _key("str_tuple", ("volume",), "averaging schemes: shell, volume, sample")
    scan: str = _key("str", "phi", "scan variable: phi, phi0 or tau")
    phi: float = _key("float", 0.0, "fixed bisector angle in degrees")
    phi0: float = _key("float", 0.0, "fixed opening angle in degrees")
    tau: float = _key("float", 0.0, "fixed delay in units of 1/gamma")
    grid_min: Optional[float] = _key("opt_float", None, "grid start (deg, or 1/gamma for tau)")
    grid_max: Optional[float] = _key("opt_float", None, "grid end (deg, or 1/gamma for tau)")
    grid_step: Optional[float] = _key("opt_float", None, "grid step (deg, or 1/gamma for tau)")
    shell_l: float = _key("float", 20.0, "shell radius in wavelengths")
    volume_r: float = _key("float", 100.0, "volume radius in wavelengths")
    sample_r: float = _key("float", 100.0, "cube half-width in wavelengths")
    sample_n: int = _key("int", 300, "atoms in each sampled cloud")
    seed: int = _key("int", 0, "PCG64 seed of the sampled cloud")
    realizations: int = _key("int", 1, "independent sampled clouds to average")
    n_atoms: int = _key("int", 300, "atom number for weak-field intensity")
    n_grid: tuple = _key("int_tuple", (10, 100, 1000), "atom numbers for the scaling report")
    output: str = _key("str", "-", "output path, '-' for stdout")
    format: str = _key("str", "csv", "csv or json")
    figure: str = _key("str", "", "optional image path for a plot of the curves")

    @property
    def pairs(self):
        return tuple(BandPair.parse(p) for p in self.pair)

    @property
    def drive(self) -> DriveParams:
        return DriveParams(rabi_half=self.omega, detuning=self.delta)

    @property
    def schemes(self):
        made = []
        for name in self.scheme:
            if name == "shell":
                made.append(Shell(self.shell_l))
            elif name == "volume":
                made.append(Volume(self.volume_r))
            else:
                made.append(Sampled(self.sample_r, self.sample_n, self.seed, self.realizations))
        return tuple(made)

    def grid(self) -> np.ndarray:
        """Grid points in interface units (degrees, or 1/gamma for tau)."""
        lo, hi, step = self.grid_min, self.grid_max, self.grid_step
        i0, i1 = lo / step, hi / step
        # integer multiples of the step keep symmetric grids exactly symmetric
        if abs(i0 - round(i0)) < 1e-9 and abs(i1 - round(i1)) < 1e-9:
            return step * np.arange(round(i0), round(i1) + 1, dtype=float)
        n = math.floor((hi - lo) / step + 1e-9)
        return lo + step * np.arange(n + 1, dtype=float)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "command"}


CONFIG_KEYS = {f.name: f for f in fields(RunConfig) if f.name != "command"}


def _convert(key, text, where):
    if key not in CONFIG_KEYS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    kind = CONFIG_KEYS[key].metadata["kind"]
    try:
        return _PARSERS[kind](text)
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value {text!r} for {key!r} ({exc})") from None


def read_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into a dict of typed values."""
    values, seen = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"{where}: key {key!r} already set on line {seen[key]}")
        seen[key] = lineno
        values[key] = _convert(key, value, where)
    return values


def _resolve_grid(command, scan, values):
    if scan == "tau":
        defaults = (0.0, 5.0, 0.05)
    else:
        defaults = (-10.0, 10.0, 0.05)
    for key, default in zip(("grid_min", "grid_max", "grid_step"), defaults):
        if values.get(key) is None:
            values[key] = default


def _validate(cfg: RunConfig):
    def bad(msg):
        raise ConfigError(msg)

    if cfg.command not in COMMANDS:
        bad(f"unknown command {cfg.command!r}")
    for p in cfg.pair:
        try:
            BandPair.parse(p)
        except ValueError as exc:
            bad(f"pair: {exc}")
    for s in cfg.scheme:
        if s not in SCHEME_NAMES:
            bad(f"scheme: unknown averaging scheme {s!r}; choose from {', '.join(SCHEME_NAMES)}")
    if len(set(cfg.scheme)) != len(cfg.scheme) or len(set(cfg.pair)) != len(cfg.pair):
        bad("pair/scheme lists must not repeat entries")
    if cfg.scan not in ("phi", "phi0", "tau"):
        bad(f"scan: expected phi, phi0 or tau, got {cfg.scan!r}")
    if cfg.format not in FORMATS:
        bad(f"format: expected csv or json, got {cfg.format!r}")
    if not cfg.omega >= 0:
        bad("omega: must be non-negative")
    if cfg.command in BAND_RESOLVED and cfg.delta != 0.0:
        bad("delta: band-resolved correlations require resonant driving (delta = 0)")
    if cfg.command in BAND_RESOLVED and cfg.omega == 0.0:
        bad("omega: band-resolved correlations need a nonzero drive")
    for key in ("phi", "phi0"):
        if abs(getattr(cfg, key)) > 180.0:
            bad(f"{key}: angle must lie in [-180, 180] degrees")
    if cfg.tau < 0:
        bad("tau: delay must be non-negative")
    if not cfg.grid_step > 0:
        bad("grid_step: must be positive")
    if cfg.grid_max < cfg.grid_min:
        bad("grid_max: must not be below grid_min")
    if cfg.scan == "tau":
        if cfg.grid_min < 0:
            bad("grid_min: delays must be non-negative")
    elif max(abs(cfg.grid_min), abs(cfg.grid_max)) > 180.0:
        bad("grid_min/grid_max: angles must lie in [-180, 180] degrees")
    if not cfg.shell_l > 1.0:
        bad("shell_l: must exceed one wavelength")
    if not cfg.volume_r > 0 or not cfg.sample_r > 0:
        bad("volume_r/sample_r: must be positive")
    if cfg.sample_n < 2:
        bad("sample_n: need at least 2 atoms")
    if not 0 <= cfg.seed < 2 ** 64:
        bad("seed: must be a 64-bit unsigned integer")
    if cfg.realizations < 1:
        bad("realizations: must be >= 1")
    if cfg.n_atoms < 1:
        bad("n_atoms: must be >= 1")
    if len(cfg.n_grid) < 2 or min(cfg.n_grid) < 2:
        bad("n_grid: need at least two atom numbers, each >= 2")


def resolve_config(command: str = "scan", file_values: Optional[dict] = None,
                   flag_values: Optional[dict] = None) -> RunConfig:
    """Merge file values and flags (flags win), apply defaults, validate."""
    values = dict(file_values or {})
    values.update(flag_values or {})
    forced = {"tau": "tau", "chi": "phi0", "intensity": "phi"}.get(command)
    if forced is not None:
        if "scan" in values and values["scan"] != forced:
            raise ConfigError(f"scan: the {command} command scans {forced}, "
                              f"not {values['scan']!r}")
        values["scan"] = forced
    scan = values.get("scan", CONFIG_KEYS["scan"].default)
    _resolve_grid(command, scan, values)
    cfg = RunConfig(command=command, **values)
    _validate(cfg)
    return cfg


def parse_config(command: str = "scan", path=None, text: Optional[str] = None,
                 flags: Optional[dict] = None) -> RunConfig:
    file_values = {}
    if path is not None:
        path = Path(path)
        file_values = read_config_text(path.read_text(encoding="utf-8"), str(path))
    elif text is not None:
        file_values = read_config_text(text)
    flag_values = {}
    for key, raw in (flags or {}).items():
        flag_values[key] = _convert(key, raw, f"flag --{key}")
    return resolve_config(command, file_values, flag_values)


def _format_value(value):
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(cfg: RunConfig) -> str:
    """Render the effective configuration as a config file that reproduces it."""
    lines = [f"# mollowg2 {cfg.command} configuration"]
    lines += [f"{key} = {_format_value(value)}" for key, value in cfg.as_dict().items()]
    return "\n".join(lines) + "\n"
