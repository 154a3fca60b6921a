"""Engine configuration.

Settings load from an optional JSON file, then environment variables with
the ``SENTINEL_`` prefix override individual keys (``SENTINEL_PHI_INITIAL``,
``SENTINEL_LOG_PATH``, ...). Anything still unset falls back to defaults.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .awareness import (
    DEFAULT_DELTA,
    DEFAULT_PHI,
    DEFAULT_PHI_MAX,
    DEFAULT_PHI_MIN,
    DEFAULT_TAU,
    ThresholdState,
)
from .errors import ParseError, ValidationError

ENV_PREFIX = "SENTINEL_"


@dataclass(frozen=True)
class EngineConfig:
    phi_initial: float = DEFAULT_PHI
    delta: float = DEFAULT_DELTA
    tau: int = DEFAULT_TAU
    phi_min: float = DEFAULT_PHI_MIN
    phi_max: float = DEFAULT_PHI_MAX
    alpha: float = 0.05
    n_min: int = 1
    lexicon_path: str | None = None
    snapshot_path: str | None = None
    log_path: str | None = None
    listen_addr: str = "127.0.0.1:8000"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.n_min < 1:
            raise ValidationError(f"n_min must be at least 1, got {self.n_min}")
        # Range checks on the threshold block are shared with ThresholdState.
        self.initial_threshold()

    def initial_threshold(self) -> ThresholdState:
        return ThresholdState(
            phi=self.phi_initial,
            delta=self.delta,
            tau=self.tau,
            phi_min=self.phi_min,
            phi_max=self.phi_max,
        )

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_FIELD_TYPES = {
    "phi_initial": float,
    "delta": float,
    "tau": int,
    "phi_min": float,
    "phi_max": float,
    "alpha": float,
    "n_min": int,
    "lexicon_path": str,
    "snapshot_path": str,
    "log_path": str,
    "listen_addr": str,
}


def _coerce(name: str, value):
    kind = _FIELD_TYPES[name]
    if value is None:
        return None
    try:
        if kind is int:
            # Reject silent truncation of e.g. tau=2.5.
            as_float = float(value)
            as_int = int(as_float)
            if as_int != as_float:
                raise ValueError(value)
            return as_int
        return kind(value)
    except (TypeError, ValueError):
        raise ValidationError(f"bad value for {name}: {value!r}") from None


def load_config(
    path: Path | str | None = None,
    env: dict[str, str] | None = None,
) -> EngineConfig:
    """Build a config from an optional JSON file plus environment overrides."""
    values: dict = {}
    if path is not None:
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read config file: {exc}") from None
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"config is not valid JSON: {exc}", line=exc.lineno) from None
        if not isinstance(doc, dict):
            raise ParseError("config file must hold a JSON object")
        for key, value in doc.items():
            if key not in _FIELD_TYPES:
                raise ValidationError(f"unknown config key: {key!r}")
            values[key] = _coerce(key, value)

    env = os.environ if env is None else env
    for name in _FIELD_TYPES:
        raw_value = env.get(ENV_PREFIX + name.upper())
        if raw_value is not None:
            values[name] = _coerce(name, raw_value)

    return EngineConfig(**values)
