"""Baseline crop-management policies: random, scheduled, and reactive.

All three stay strictly inside the action bounds, so the environment never
clamps them. The scheduled policy is a pure function of the day index; the
reactive policy is a pure function of the soil diagnostics it receives
through the environment's info channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .environment import Action


@dataclass(frozen=True)
class SchedulePolicyParams:
    """Fixed-calendar applications: early/mid/late fertilizer plus periodic irrigation.

    Defaults: 60/60/40 kg/ha of fertilizer on days 7, 45 and 80 (160 kg/ha
    total) and 25 mm of irrigation every 7 days.
    """

    fert_days: tuple[tuple[int, float], ...] = ((7, 60.0), (45, 60.0), (80, 40.0))
    irrig_period: int = 7
    irrig_amount: float = 25.0

    def __post_init__(self) -> None:
        if self.irrig_period < 1:
            raise ValueError(f"irrig_period must be >= 1, got {self.irrig_period}")
        if self.irrig_amount < 0.0:
            raise ValueError(f"irrig_amount must be >= 0, got {self.irrig_amount}")
        for day, amount in self.fert_days:
            if day < 0 or amount < 0.0:
                raise ValueError(f"invalid schedule entry ({day}, {amount})")


@dataclass(frozen=True)
class ReactivePolicyParams:
    """Trigger thresholds for the reactive agent.

    Both inputs are applied together, and only once the nitrate pool is
    depleted and the soil has dried below the water threshold.
    """

    n_threshold: float = 20.0            # kg/ha nitrate defining "depleted"
    n_dose: float = 50.0                 # kg/ha applied per trigger
    sw_threshold_fraction: float = 0.35  # of capacity, defining "dry"
    irrig_dose: float = 50.0             # mm applied per trigger

    def __post_init__(self) -> None:
        if self.n_threshold < 0.0 or self.n_dose < 0.0:
            raise ValueError("nitrogen threshold and dose must be >= 0")
        if not 0.0 <= self.sw_threshold_fraction <= 1.0:
            raise ValueError(f"sw_threshold_fraction must be in [0, 1], got {self.sw_threshold_fraction}")
        if self.irrig_dose < 0.0:
            raise ValueError(f"irrig_dose must be >= 0, got {self.irrig_dose}")


def random_policy(rng: np.random.Generator, f_max: float, i_max: float) -> Action:
    """Uniform random amounts of both inputs within the bounds."""
    return Action(fert=float(rng.uniform(0.0, f_max)), irrig=float(rng.uniform(0.0, i_max)))


def standard_policy(day: int, p: SchedulePolicyParams) -> Action:
    """Calendar application: scheduled fertilizer plus periodic irrigation."""
    fert = 0.0
    for d, amount in p.fert_days:
        if d == day:
            fert = amount
            break
    irrig = p.irrig_amount if day % p.irrig_period == 0 else 0.0
    return Action(fert=fert, irrig=irrig)


def reactive_policy(
    n_pool: float, sw: float, sw_capacity: float, p: ReactivePolicyParams
) -> Action:
    """Threshold application: heavy doses of both inputs once nitrate is
    depleted and the soil is dry (both conditions required)."""
    if n_pool < p.n_threshold and sw < p.sw_threshold_fraction * sw_capacity:
        return Action(fert=p.n_dose, irrig=p.irrig_dose)
    return Action(fert=0.0, irrig=0.0)


class RandomAgent:
    """Dynamics-agnostic agent drawing uniform actions from a seeded stream."""

    name = "random"

    def __init__(self, f_max: float = 50.0, i_max: float = 50.0, seed: int = 0):
        self.f_max = f_max
        self.i_max = i_max
        self.rng = np.random.default_rng(seed)

    def act(self, obs, info) -> Action:
        return random_policy(self.rng, self.f_max, self.i_max)


class StandardAgent:
    """Fixed-schedule agent following conventional phased applications."""

    name = "standard"

    def __init__(self, params: SchedulePolicyParams | None = None):
        self.params = params or SchedulePolicyParams()

    def act(self, obs, info) -> Action:
        return standard_policy(int(info["day"]), self.params)


class ReactiveAgent:
    """Threshold agent applying heavy doses whenever reserves run low."""

    name = "reactive"

    def __init__(self, params: ReactivePolicyParams | None = None):
        self.params = params or ReactivePolicyParams()

    def act(self, obs, info) -> Action:
        return reactive_policy(
            float(info["n_pool"]), float(info["sw"]), float(info["sw_capacity"]), self.params
        )
