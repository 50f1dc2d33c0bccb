"""
Sweep configuration: dataclasses plus a TOML loader.

Example file (every key optional)::

    seed = 0
    parallelism = 1
    output_dir = "out"
    cache_dir = "cache"
    unit_tol = 1e-6

    [k_values]               # or: k_values = [6.6, 17.0]
    start = 2.0
    stop = 20.0
    step = 0.25

    [quantum]
    enabled = true
    D = 1000
    t_max = 36
    grid = "positive"        # or "symmetric"

    [pf.fourier]
    enabled = true
    truncation = 30          # modes per axis; k_max = truncation // 2
    sigma = 0.2

    [pf.momentum_position]
    enabled = true
    N = 90
    s = 0.001

    [pf.ulam]
    enabled = false
    M = 30
    n_per_cell = 100
    noise = "hbar"           # 1/(2 pi M), or a number

    [area]
    enabled = false
    n_total = 100000
    steps = 10000
    hole = [0.0, 0.1, 0.0, 0.1]   # q0, q1, p0, p1

    [fit]
    min_length = 4
    r2_floor = 0.98
    saturation_margin = 0.1
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .fitting import WindowPolicy

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger(__name__)

SLOW_D = 5000


@dataclass
class QuantumConfig:
    enabled: bool = True
    D: int = 1000
    t_max: int = 36
    grid: str = "positive"
    evolve: str = "P"
    resymmetrize: bool = True
    d_cap: int = 2000


@dataclass
class FourierConfig:
    enabled: bool = True
    truncation: int = 30
    sigma: float = 0.2


@dataclass
class MomentumPositionConfig:
    enabled: bool = True
    N: int = 90
    s: float = 0.001


@dataclass
class UlamConfig:
    enabled: bool = False
    M: int = 30
    n_per_cell: int = 100
    noise: object = "hbar"

    def noise_std(self):
        if self.noise == "hbar":
            return 1.0 / (2 * math.pi * self.M)
        return float(self.noise)


@dataclass
class PFConfig:
    fourier: FourierConfig = field(default_factory=FourierConfig)
    momentum_position: MomentumPositionConfig = field(default_factory=MomentumPositionConfig)
    ulam: UlamConfig = field(default_factory=UlamConfig)


@dataclass
class AreaConfig:
    enabled: bool = False
    n_total: int = 100_000
    steps: int = 10_000
    hole: tuple = (0.0, 0.1, 0.0, 0.1)


@dataclass
class SweepConfig:
    k_values: list = field(default_factory=lambda: [6.6, 17.0])
    quantum: QuantumConfig = field(default_factory=QuantumConfig)
    pf: PFConfig = field(default_factory=PFConfig)
    area: AreaConfig = field(default_factory=AreaConfig)
    fit: WindowPolicy = field(default_factory=WindowPolicy)
    output_dir: str = "out"
    cache_dir: str = "cache"
    parallelism: int = 1
    seed: int = 0
    unit_tol: float = 1e-6

    def validate(self):
        if not self.k_values:
            raise ConfigError("k_values is empty")
        if any(not (k >= 0) for k in self.k_values):
            raise ConfigError("all K values must be >= 0")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        q = self.quantum
        if q.enabled:
            if q.D < 2 or q.t_max < 1:
                raise ConfigError("quantum.D must be >= 2 and quantum.t_max >= 1")
            if q.grid not in ("positive", "symmetric"):
                raise ConfigError(f"unknown quantum.grid {q.grid!r}")
            if q.D >= SLOW_D:
                log.warning("D=%d: dense evolution will take a long time", q.D)
        if not 0 < self.unit_tol < 1:
            raise ConfigError("unit_tol must lie in (0, 1)")
        if self.pf.ulam.enabled:
            try:
                self.pf.ulam.noise_std()
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad pf.ulam.noise: {self.pf.ulam.noise!r}") from exc
        return self


def expand_k_values(spec):
    """Explicit list, or a ``{start, stop, step}`` range with ``stop`` included."""
    if isinstance(spec, dict):
        try:
            start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        except KeyError as exc:
            raise ConfigError(f"k_values range needs start/stop/step, missing {exc}") from None
        if step <= 0:
            raise ConfigError("k_values step must be > 0")
        if stop < start:
            raise ConfigError("k_values stop < start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(n)]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    return [float(k) for k in spec]


def _fill(cls, data, where):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"[{where}] must be a table")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown keys in [{where}]: {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{where}]: {exc}") from exc


def from_dict(data) -> SweepConfig:
    data = dict(data)
    pf = data.pop("pf", {}) or {}
    unknown_pf = set(pf) - {"fourier", "momentum_position", "ulam"}
    if unknown_pf:
        raise ConfigError(f"unknown pf methods: {sorted(unknown_pf)}")
    area = data.pop("area", None)
    if area is not None and "hole" in area:
        area = dict(area, hole=tuple(float(h) for h in area["hole"]))
    cfg = SweepConfig(
        quantum=_fill(QuantumConfig, data.pop("quantum", None), "quantum"),
        pf=PFConfig(
            fourier=_fill(FourierConfig, pf.get("fourier"), "pf.fourier"),
            momentum_position=_fill(MomentumPositionConfig, pf.get("momentum_position"),
                                    "pf.momentum_position"),
            ulam=_fill(UlamConfig, pf.get("ulam"), "pf.ulam"),
        ),
        area=_fill(AreaConfig, area, "area"),
        fit=_fill(WindowPolicy, data.pop("fit", None), "fit"),
    )
    if "k_values" in data:
        cfg.k_values = expand_k_values(data.pop("k_values"))
    for key in ("output_dir", "cache_dir", "parallelism", "seed", "unit_tol"):
        if key in data:
            setattr(cfg, key, data.pop(key))
    if data:
        raise ConfigError(f"unknown top-level keys: {sorted(data)}")
    return cfg


def load_config(path) -> SweepConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return from_dict(data)


def to_dict(cfg: SweepConfig):
    d = dataclasses.asdict(cfg)
    d["area"]["hole"] = list(cfg.area.hole)
    return d
