"""Hyperparameters, flat key=value config files, and CLI overrides."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class InfGnnHyperParams:
    layers: int = 2
    hidden_dim: int = 64
    lambda1: float = 1.0
    lambda2: float = 0.01
    lambda3: float = 1e-4
    negative_samples: int = 5
    learning_rate: float = 0.05
    epochs: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be >= 1")
        for name in ("lambda1", "lambda2", "lambda3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.negative_samples < 1:
            raise ValueError("negative_samples must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(InfGnnHyperParams)}


def _coerce(key: str, text: str):
    if key not in _FIELD_TYPES:
        raise ValueError(f"unknown hyperparameter {key!r}")
    kind = _FIELD_TYPES[key]
    return int(text) if kind in (int, "int") else float(text)


def parse_config(path=None, overrides=()) -> InfGnnHyperParams:
    """Read a flat `key = value` file (# comments allowed), then apply
    `key=value` override strings on top."""
    values = {}
    if path is not None:
        p = Path(path)
        for lineno, line in enumerate(p.read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{p}:{lineno}: expected 'key = value'")
            key, text = (part.strip() for part in line.split("=", 1))
            values[key] = _coerce(key, text)
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not key=value")
        key, text = (part.strip() for part in item.split("=", 1))
        values[key] = _coerce(key, text)
    return InfGnnHyperParams(**values)
