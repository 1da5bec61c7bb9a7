"""Flat `key = value` configuration files and override handling.

One syntax everywhere: blank lines and `#` comments ignored, one
`key = value` pair per line. Dotted prefixes route values to the right
component (`crop.`, `soil.`, `climate.`, `reward.`, `standard.`,
`reactive.`, `train.`); bare keys configure the episode itself.

Examples:
    duration = 120
    mode = deterministic
    crop.phu_total = 1400
    standard.schedule = 7:60,45:60,80:40
    train.episodes = 200
"""

from __future__ import annotations

import dataclasses
import os

from .agents import ReactivePolicyParams, SchedulePolicyParams
from .dynamics import CropParams, SoilParams
from .environment import EpisodeConfig, RewardParams
from .rl.training import TrainConfig
from .weather import ClimateProfile


def parse_kv_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse flat key = value lines into a string dict."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def load_kv_file(path: str | os.PathLike) -> dict[str, str]:
    with open(path) as fh:
        return parse_kv_text(fh.read(), source=str(path))


def _coerce(value, target_type):
    if isinstance(value, str):
        if target_type is int:
            return int(value)
        if target_type is float:
            return float(value)
        if target_type is bool:
            return value.lower() in ("1", "true", "yes", "on")
    return value


def _build_dataclass(cls, prefix: str, overrides: dict):
    """Instantiate a params dataclass from `prefix.field` override keys."""
    kwargs = {}
    valid = {f.name: f for f in dataclasses.fields(cls)}
    for key, value in overrides.items():
        if not key.startswith(prefix + "."):
            continue
        name = key[len(prefix) + 1:]
        if name not in valid:
            raise ValueError(f"unknown config key {key!r} (no field {name!r} on {cls.__name__})")
        hint = str(valid[name].type)
        if hint == "int":
            kwargs[name] = _coerce(value, int)
        elif hint == "float":
            kwargs[name] = _coerce(value, float)
        elif hint.startswith("tuple[float") and isinstance(value, str):
            kwargs[name] = tuple(float(v) for v in value.split(","))
        else:
            kwargs[name] = value
    return cls(**kwargs)


def _parse_schedule(text: str) -> tuple[tuple[int, float], ...]:
    """Parse 'day:amount,day:amount,...' fertilizer schedules."""
    entries = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        day, sep, amount = part.partition(":")
        if not sep:
            raise ValueError(f"bad schedule entry {part!r}, expected day:amount")
        entries.append((int(day), float(amount)))
    return tuple(entries)


def build_episode_config(overrides: dict | None = None) -> EpisodeConfig:
    """Assemble an EpisodeConfig from flat overrides (defaults otherwise)."""
    ov = dict(overrides or {})
    kwargs: dict[str, object] = {}
    for name, typ in (("duration", int), ("seed", int), ("mode", str),
                      ("f_max", float), ("i_max", float), ("noise_scale", float),
                      ("weather_file", str), ("log_path", str)):
        if name in ov:
            kwargs[name] = _coerce(ov[name], typ)
    if "weather_file" not in kwargs:
        kwargs["climate"] = _build_dataclass(ClimateProfile, "climate", ov)
    kwargs["crop"] = _build_dataclass(CropParams, "crop", ov)
    kwargs["soil"] = _build_dataclass(SoilParams, "soil", ov)
    kwargs["reward"] = _build_dataclass(RewardParams, "reward", ov)
    return EpisodeConfig(**kwargs)


def build_schedule_params(overrides: dict | None = None) -> SchedulePolicyParams:
    ov = dict(overrides or {})
    kwargs: dict[str, object] = {}
    if "standard.schedule" in ov:
        kwargs["fert_days"] = _parse_schedule(ov["standard.schedule"])
    if "standard.irrig_period" in ov:
        kwargs["irrig_period"] = _coerce(ov["standard.irrig_period"], int)
    if "standard.irrig_amount" in ov:
        kwargs["irrig_amount"] = _coerce(ov["standard.irrig_amount"], float)
    return SchedulePolicyParams(**kwargs)


def build_reactive_params(overrides: dict | None = None) -> ReactivePolicyParams:
    return _build_dataclass(ReactivePolicyParams, "reactive", dict(overrides or {}))


def build_train_config(overrides: dict | None = None) -> TrainConfig:
    return _build_dataclass(TrainConfig, "train", dict(overrides or {}))
