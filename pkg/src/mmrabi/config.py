"""Line-oriented ``key = value`` run configuration."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from .circuit import CircuitParams
from .errors import ConfigError


@dataclass(frozen=True)
class RunConfig:
    f0_ghz: float = 10.0
    z0_ohm: float = 50.0
    cc_ff: float = 50.0
    cj_ff: float = 0.0
    ej_ghz: float = 20.0
    n_max: int = 20
    budget: int = 200_000
    m_min: int = 1
    m_max: int = 6
    modes: int = 300
    seed: int = 0
    out_dir: str = "."

    def circuit(self) -> CircuitParams:
        return CircuitParams.from_io(
            f0_ghz=self.f0_ghz,
            z0_ohm=self.z0_ohm,
            cc_ff=self.cc_ff,
            cj_ff=self.cj_ff,
            ej_ghz=self.ej_ghz,
        )

    def to_dict(self):
        return asdict(self)

    def with_overrides(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        cfg = replace(self, **changes)
        validate(cfg)
        return cfg


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_FLOAT_KEYS = {"f0_ghz", "z0_ohm", "cc_ff", "cj_ff", "ej_ghz"}
_INT_KEYS = {"n_max", "budget", "m_min", "m_max", "modes", "seed"}


def validate(cfg: RunConfig, line_of=None):
    line_of = line_of or {}

    def fail(key, msg):
        raise ConfigError(f"{key}: {msg}", line_of.get(key))

    for key in _FLOAT_KEYS:
        if not math.isfinite(getattr(cfg, key)):
            fail(key, "must be finite")
    for key in ("f0_ghz", "z0_ohm", "cc_ff", "ej_ghz"):
        if getattr(cfg, key) <= 0:
            fail(key, f"must be positive, got {getattr(cfg, key)!r}")
    if cfg.cj_ff < 0:
        fail("cj_ff", f"must be non-negative, got {cfg.cj_ff!r}")
    if cfg.n_max < 1:
        fail("n_max", "must be >= 1")
    if cfg.budget < 64:
        fail("budget", "must be >= 64")
    if cfg.m_min < 1:
        fail("m_min", "must be >= 1")
    if cfg.m_max < cfg.m_min:
        fail("m_max", "must be >= m_min")
    if cfg.modes < 1:
        fail("modes", "must be >= 1")
    if cfg.seed < 0:
        fail("seed", "must be >= 0")


def _convert(key, raw, line):
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {raw!r}", line) from None
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}", line) from None
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        raw = raw[1:-1]
    return raw


def parse_config(text: str) -> RunConfig:
    values, line_of = {}, {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno)
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not raw:
            raise ConfigError(f"missing value for {key!r}", lineno)
        values[key] = _convert(key, raw, lineno)
        line_of[key] = lineno
    cfg = RunConfig(**values)
    validate(cfg, line_of)
    return cfg


def render_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        value = getattr(cfg, f.name)
        if f.name in _FLOAT_KEYS:
            text = repr(float(value))
        elif f.name in _INT_KEYS:
            text = str(int(value))
        else:
            text = f'"{value}"'
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"
