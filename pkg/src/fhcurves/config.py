"""Flat ``key = value`` run configuration with typed parsing."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .placement import DirectionTable


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(",", " ").split())


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


@dataclass(frozen=True)
class RunConfig:
    horizon: int = 1_000_000
    j_max: str = "auto"
    density_n0: int = 10_000
    gap_check_limit: int = 100_000
    block_length_scale: int = 1024
    block_gap_offset: int = 120
    interval_law: str = "stride"
    epsilon_intervals: float = 1.0
    grid_l_values: str = "auto"
    catalogue: str = "default"
    K: int = 3
    S: tuple[int, ...] = (8,)
    directions: tuple[str, ...] = ("0", "2/3pi", "4/3pi")
    epsilon_target: float = 0.5
    ladder: str = "1/16:131072:2"
    proximity_nodes: int = 1024
    proximity_cap: int = 32768
    area_radii: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0, 10.0)
    area_angular_cap: int = 32768
    convergence_samples: int = 1000
    placement_samples: int = 1000
    decay_samples: int = 1000
    boundary_nodes: int = 256
    budget_n_max: int = 50
    seed: int = 1
    out: str = "out"
    base_dir: str = field(default=".", compare=False)

    def S_for(self, k: int) -> int:
        return self.S[k - 1] if len(self.S) > 1 else self.S[0]

    def S_map(self) -> dict:
        return {k: self.S_for(k) for k in range(1, self.K + 1)}

    def direction_table(self) -> DirectionTable:
        return DirectionTable.parse(self.directions)

    def catalogue_text(self) -> str:
        if self.catalogue == "default":
            return resources.files("fhcurves.data").joinpath("default_catalogue.txt").read_text()
        path = self.catalogue_path()
        try:
            return path.read_text()
        except OSError as exc:
            raise OSError(f"cannot read catalogue file {path}: {exc.strerror}") from exc

    def catalogue_path(self) -> Path:
        p = Path(self.catalogue)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def out_dir(self) -> Path:
        p = Path(self.out)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def to_text(self) -> str:
        """Canonical text form; used for content hashing."""
        lines = []
        for f in dataclasses.fields(self):
            if f.name in ("base_dir", "out"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ", ".join(str(x) for x in v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


_PARSERS = {
    int: int,
    float: float,
    str: str,
    "S": _int_list,
    "directions": _str_list,
    "area_radii": lambda t: tuple(float(x) for x in _str_list(t)),
}


def _convert(name: str, ftype, text: str):
    if name in _PARSERS:
        return _PARSERS[name](text)
    if ftype in ("int", int):
        return int(text)
    if ftype in ("float", float):
        return float(text)
    return text


def validate(cfg: RunConfig) -> RunConfig:
    pos = ["horizon", "density_n0", "gap_check_limit", "block_length_scale", "K",
           "proximity_nodes", "proximity_cap", "area_angular_cap", "convergence_samples",
           "placement_samples", "decay_samples", "boundary_nodes", "budget_n_max"]
    for name in pos:
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if cfg.block_gap_offset < 0 or cfg.seed < 0:
        raise ConfigError("block_gap_offset and seed must be non-negative")
    if cfg.density_n0 >= cfg.horizon:
        raise ConfigError("density_n0 must be below horizon")
    if cfg.interval_law not in ("stride", "power"):
        raise ConfigError("interval_law must be 'stride' or 'power'")
    if not cfg.epsilon_intervals > 0 or not cfg.epsilon_target > 0:
        raise ConfigError("epsilon values must be positive")
    if not cfg.S or any(s < 1 for s in cfg.S) or (len(cfg.S) > 1 and len(cfg.S) != cfg.K):
        raise ConfigError("S must be one positive count or one per curve")
    if any(not (r > 0 and math.isfinite(r)) for r in cfg.area_radii):
        raise ConfigError("area_radii must be positive")
    if cfg.j_max != "auto":
        try:
            if int(cfg.j_max) < 1:
                raise ValueError
        except ValueError:
            raise ConfigError("j_max must be 'auto' or a positive integer") from None
    if cfg.grid_l_values != "auto":
        try:
            vals = _int_list(cfg.grid_l_values)
        except ValueError:
            raise ConfigError("grid_l_values must be 'auto' or a list of integers") from None
        if not vals or min(vals) < 1:
            raise ConfigError("grid_l_values must be positive")
    try:
        cfg.direction_table()
    except ValueError as exc:
        raise ConfigError(f"directions: {exc}") from exc
    from .assembler import parse_ladder
    try:
        parse_ladder(cfg.ladder)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def parse_config(text: str, source: str = "<config>", base_dir: str = ".") -> RunConfig:
    fields = {f.name: f for f in dataclasses.fields(RunConfig) if f.name != "base_dir"}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, val = (x.strip() for x in line.split("=", 1))
        if key not in fields:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _convert(key, fields[key].type, val)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
    try:
        return validate(RunConfig(base_dir=base_dir, **values))
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        text = resources.files("fhcurves.data").joinpath("default.cfg").read_text()
        return parse_config(text, "default.cfg", ".")
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, str(path), str(path.parent))


def override(cfg: RunConfig, **changes) -> RunConfig:
    changes = {k: v for k, v in changes.items() if v is not None}
    return validate(dataclasses.replace(cfg, **changes)) if changes else cfg
