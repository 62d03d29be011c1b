"""Configuration for heunseries."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import UsageError
from .recurrence import SeriesControl
from .trf import TrfTruncation

_DEFAULT_CONFIG_DIR = Path.home() / ".heunseries"
_DEFAULT_CONFIG_FILE = _DEFAULT_CONFIG_DIR / "config.json"


@dataclass
class RkControl:
    """Adaptive integration settings for the ODE oracle."""
    x0: float = 0.05
    tol: float = 1e-10
    method: str = "DOP853"


@dataclass
class OutputControl:
    csv_digits: int = 15


@dataclass
class Config:
    # Frobenius summation
    series: SeriesControl = field(default_factory=SeriesControl)

    # 3TRF truncation; trf_radius is copied into it on load
    trf: TrfTruncation = field(default_factory=TrfTruncation)
    trf_radius: float = 0.5

    rk: RkControl = field(default_factory=RkControl)
    output: OutputControl = field(default_factory=OutputControl)

    def with_overrides(
        self, tol: float | None = None, n_max: int | None = None, method: str | None = None,
    ) -> Config:
        """Apply --tol / --n-max to the controls the method sums with.

        trf uses the 3TRF truncation; frobenius and rk (its start values) use
        the series control; no method means both.
        """
        changes = {k: v for k, v in (("tol", tol), ("n_max", n_max)) if v is not None}
        if not changes:
            return self
        series, trf = self.series, self.trf
        if method != "trf":
            series = replace(series, **changes)
        if method not in ("frobenius", "rk"):
            trf = replace(trf, **changes)
        return replace(self, series=series, trf=trf)


def _section(current, data: dict, name: str):
    raw = data.get(name)
    if raw is None:
        return current
    if not isinstance(raw, dict):
        raise UsageError(f"config section '{name}' must be an object")
    known = {f.name for f in fields(current)}
    unknown = set(raw) - known
    if unknown:
        raise UsageError(f"unknown keys in config section '{name}': {', '.join(sorted(unknown))}")
    try:
        return replace(current, **raw)
    except TypeError as e:
        raise UsageError(f"config section '{name}': {e}") from e


def load_config(path: str | None = None) -> Config:
    """Load config from a JSON file. Keys that are absent keep their defaults."""
    cfg = Config()
    config_path = Path(path) if path else _DEFAULT_CONFIG_FILE

    if config_path.exists():
        try:
            with open(config_path, encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {config_path}: {e}") from e
        if not isinstance(data, dict):
            raise UsageError(f"config {config_path} must hold a JSON object, got {type(data).__name__}")

        cfg.series = _section(cfg.series, data, "series")
        cfg.trf = _section(cfg.trf, data, "trf")
        cfg.rk = _section(cfg.rk, data, "rk")
        cfg.output = _section(cfg.output, data, "output")
        cfg.trf_radius = data.get("trf_radius", cfg.trf.radius)
    elif path:
        raise UsageError(f"config file not found: {config_path}")

    cfg.trf = replace(cfg.trf, radius=cfg.trf_radius)
    return cfg
