"""Daily corn-growth simulation with an episodic control interface.

A season runs day by day: weather drives phenology, water and nitrogen
balances, and radiation-limited growth; the controller chooses daily
fertilizer and irrigation amounts and is rewarded with the day's yield gain
minus input costs. Baseline policies, from-scratch DDPG/TD3 learners, and a
benchmarking CLI are included.
"""

from .agents import (
    RandomAgent,
    ReactiveAgent,
    ReactivePolicyParams,
    SchedulePolicyParams,
    StandardAgent,
    random_policy,
    reactive_policy,
    standard_policy,
)
from .dynamics import CropParams, CropState, SoilParams, SoilState, step_dynamics
from .environment import (
    OBSERVATION_FIELDS,
    OBSERVATION_SIZE,
    Action,
    CropEnv,
    EpisodeConfig,
    EpisodeFinished,
    RewardParams,
    observe,
    reward,
    run_episode,
)
from .weather import ClimateProfile, WeatherDay, generate_weather, load_weather_csv, perturb

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ClimateProfile",
    "CropEnv",
    "CropParams",
    "CropState",
    "EpisodeConfig",
    "EpisodeFinished",
    "OBSERVATION_FIELDS",
    "OBSERVATION_SIZE",
    "RandomAgent",
    "ReactiveAgent",
    "ReactivePolicyParams",
    "RewardParams",
    "SchedulePolicyParams",
    "SoilParams",
    "SoilState",
    "StandardAgent",
    "WeatherDay",
    "generate_weather",
    "load_weather_csv",
    "observe",
    "perturb",
    "random_policy",
    "reactive_policy",
    "reward",
    "run_episode",
    "standard_policy",
    "step_dynamics",
]
