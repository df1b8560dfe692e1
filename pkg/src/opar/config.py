"""YAML scenario configuration.

Top-level keys mirror :class:`ScenarioConfig`; ``volume``, ``mobility``
and ``weights`` are nested sections. Omitted keys take their defaults.
``weights`` may give only ``w1``, in which case ``w2 = 1 - w1``.
"""
from __future__ import annotations

import dataclasses
import os
from typing import Any, Dict, Union

import yaml

from .errors import ConfigError, InvalidInputError
from .mobility import MobilityConfig, Volume
from .optimizer import Weights
from .simulator import ScenarioConfig

_SECTIONS = {"volume": Volume, "mobility": MobilityConfig, "weights": Weights}


def _field_names(cls):
    return [f.name for f in dataclasses.fields(cls)]


def _build(cls, data: Dict[str, Any], prefix: str):
    if not isinstance(data, dict):
        raise ConfigError(prefix, "expected a mapping")
    known = _field_names(cls)
    for key in data:
        if key not in known:
            raise ConfigError(f"{prefix}.{key}", "unknown key")
    try:
        return cls(**data)
    except InvalidInputError as exc:
        raise ConfigError(prefix, str(exc)) from None
    except TypeError as exc:
        raise ConfigError(prefix, str(exc)) from None


def config_from_dict(data: Dict[str, Any]) -> ScenarioConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    known = _field_names(ScenarioConfig)
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(key, "unknown key")
        if key in _SECTIONS:
            if key == "weights" and isinstance(value, dict) and "w2" not in value and "w1" in value:
                value = dict(value, w2=1.0 - value["w1"])
            value = _build(_SECTIONS[key], value, key)
        elif key == "initial_positions" and value is not None:
            value = tuple(tuple(float(c) for c in p) for p in value)
        elif key == "flows" and value is not None:
            value = tuple((int(s), int(d)) for s, d in value)
        kwargs[key] = value
    try:
        return ScenarioConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError("<root>", str(exc)) from None


def parse_config(source: Union[str, os.PathLike]) -> ScenarioConfig:
    """Parse a config from a file path or from YAML text."""
    text = str(source)
    if isinstance(source, os.PathLike) or not any(c in text for c in "\n:{"):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError("<file>", f"cannot read {text}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<root>", f"unreadable YAML: {exc}") from None
    return config_from_dict(data)


def config_to_dict(cfg: ScenarioConfig) -> Dict[str, Any]:
    out = {}
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if dataclasses.is_dataclass(value):
            value = dataclasses.asdict(value)
        elif isinstance(value, tuple):
            value = [list(v) for v in value]
        out[f.name] = value
    return out


def dump_config(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False, default_flow_style=False)
