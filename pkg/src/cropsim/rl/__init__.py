"""Actor-critic learners, replay memory, and training/evaluation loops."""

from .agents import DdpgAgent, Td3Agent, TrainHyperparams, make_agent
from .nets import Adam, Mlp, soft_update
from .replay import ReplayBuffer
from .training import (
    OBS_SCALES,
    AgentPolicy,
    TrainConfig,
    derive_seed,
    evaluate,
    normalize_obs,
    train,
    u_to_action,
)

__all__ = [
    "Adam",
    "AgentPolicy",
    "DdpgAgent",
    "Mlp",
    "OBS_SCALES",
    "ReplayBuffer",
    "Td3Agent",
    "TrainConfig",
    "TrainHyperparams",
    "derive_seed",
    "evaluate",
    "make_agent",
    "normalize_obs",
    "soft_update",
    "train",
    "u_to_action",
]
