"""Training and evaluation loops for the actor-critic learners.

The run protocol: a warmup phase of uniform random actions fills the replay
buffer, then the exploration policy takes over with one gradient update per
environment step. Every eval_period simulated days the current policy is
scored greedily on eval_runs fresh deterministic-mode episodes (seeds
derived from the run seed, fixed across the whole run) and the mean return
is appended to the learning curve.

Observations are scaled by fixed per-feature constants rather than running
statistics, which keeps runs bit-reproducible for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..environment import OBSERVATION_SIZE, Action, CropEnv, run_episode
from .agents import DdpgAgent, TrainHyperparams, make_agent
from .replay import ReplayBuffer

# Fixed normalization constants, one per observation slot:
# t_mean, precip, ref_et, solar, vapor, e_a, wb_cum, rcn, lai,
# n_up, dn, n_strs, t_strs, w_strs
OBS_SCALES = np.array(
    [40.0, 50.0, 10.0, 30.0, 50.0, 10.0, 500.0, 100.0, 3.0, 10.0, 5.0, 1.0, 1.0, 1.0]
)

# Seed-derivation tags (keep distinct so streams never collide)
_TAG_INIT = 11
_TAG_EXPLORE = 12
_TAG_EVAL = 13
_TAG_TRAIN_ENV = 14


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters and protocol settings for one training run."""

    discount: float = 0.99
    tau: float = 0.005
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    batch_size: int = 256
    warmup_steps: int = 1000
    expl_noise: float = 0.1        # std of Gaussian exploration in [-1, 1] action units
    policy_noise: float = 0.2      # twin-critic target smoothing noise
    noise_clip: float = 0.5
    policy_delay: int = 2
    episodes: int = 200
    eval_period: int = 7           # simulated days between evaluations
    eval_runs: int = 10
    seeds: int = 5
    buffer_capacity: int = 100_000

    def __post_init__(self) -> None:
        if not 0.0 <= self.discount < 1.0:
            raise ValueError(f"discount must be in [0, 1), got {self.discount}")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        for name in ("batch_size", "policy_delay", "episodes", "eval_period", "eval_runs",
                     "seeds", "buffer_capacity"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.warmup_steps < 0:
            raise ValueError(f"warmup_steps must be >= 0, got {self.warmup_steps}")

    def hyperparams(self) -> TrainHyperparams:
        return TrainHyperparams(
            discount=self.discount,
            tau=self.tau,
            actor_lr=self.actor_lr,
            critic_lr=self.critic_lr,
            batch_size=self.batch_size,
            policy_noise=self.policy_noise,
            noise_clip=self.noise_clip,
            policy_delay=self.policy_delay,
        )


def derive_seed(*keys: int) -> int:
    """Deterministically mix integer keys into a fresh seed."""
    return int(np.random.SeedSequence(list(keys)).generate_state(1)[0])


def normalize_obs(obs: np.ndarray, scales: np.ndarray = OBS_SCALES) -> np.ndarray:
    """Element-wise observation scaling (exact inverse: multiply back)."""
    if np.any(scales <= 0.0):
        raise ValueError("all normalization scales must be > 0")
    return np.asarray(obs) / scales


def u_to_action(u: np.ndarray, f_max: float, i_max: float) -> Action:
    """Affine map from squashed [-1, 1]^2 output to environment amounts."""
    return Action(
        fert=(float(u[0]) + 1.0) * 0.5 * f_max,
        irrig=(float(u[1]) + 1.0) * 0.5 * i_max,
    )


class AgentPolicy:
    """Greedy wrapper exposing a trained agent through the baseline-policy interface."""

    def __init__(self, agent: DdpgAgent, f_max: float, i_max: float,
                 scales: np.ndarray = OBS_SCALES):
        self.agent = agent
        self.f_max = f_max
        self.i_max = i_max
        self.scales = scales

    def act(self, obs, info) -> Action:
        u = self.agent.act_u(normalize_obs(obs, self.scales))
        return u_to_action(np.clip(u, -1.0, 1.0), self.f_max, self.i_max)


EnvFactory = Callable[[int, bool], CropEnv]  # (seed, deterministic) -> env


def evaluate(env_factory: EnvFactory, policy_factory: Callable[[int], object],
             runs: int, seed: int) -> tuple[float, float]:
    """Score a policy greedily over several episodes.

    Each run gets a deterministic-mode environment and a fresh policy, both
    seeded from (seed, run index). Returns the mean and population standard
    deviation of the undiscounted episode returns.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    returns = np.empty(runs)
    for i in range(runs):
        run_seed = derive_seed(seed, _TAG_EVAL, i)
        env = env_factory(run_seed, True)
        policy = policy_factory(run_seed)
        returns[i] = run_episode(env, policy)
    return float(returns.mean()), float(returns.std())


def _evaluate_agent_lockstep(envs: list[CropEnv], agent: DdpgAgent,
                             scales: np.ndarray) -> tuple[float, float]:
    """Greedy evaluation of all runs in lockstep (one batched forward per day).

    Identical results to evaluate() with the same envs; episodes share the
    fixed horizon so they finish together.
    """
    obs = np.stack([env.reset() for env in envs]) / scales
    totals = np.zeros(len(envs))
    done = False
    while not done:
        u = np.clip(agent.act_u(obs), -1.0, 1.0)
        for i, env in enumerate(envs):
            o, r, done, _ = env.step(u_to_action(u[i], env.cfg.f_max, env.cfg.i_max))
            obs[i] = o
            totals[i] += r
        obs /= scales
    return float(totals.mean()), float(totals.std())


def train(env_factory: EnvFactory, algo: str, cfg: TrainConfig, seed: int,
          scales: np.ndarray = OBS_SCALES):
    """Run one seeded training run; returns (learning curve, trained agent).

    The curve is a list of (env step, mean eval return, std) tuples with one
    entry per eval_period simulated days.
    """
    env = env_factory(derive_seed(seed, _TAG_TRAIN_ENV), False)
    obs_dim = OBSERVATION_SIZE
    act_dim = 2
    f_max, i_max = env.cfg.f_max, env.cfg.i_max

    agent = make_agent(algo, obs_dim, act_dim, cfg.hyperparams(), seed=derive_seed(seed, _TAG_INIT))
    buffer = ReplayBuffer(cfg.buffer_capacity, obs_dim, act_dim, dtype=agent.dtype)
    rng = np.random.default_rng(np.random.SeedSequence([seed, _TAG_EXPLORE]))
    eval_envs = [
        env_factory(derive_seed(seed, _TAG_EVAL, i), True) for i in range(cfg.eval_runs)
    ]

    curve: list[tuple[int, float, float]] = []
    total_steps = 0
    for _ in range(cfg.episodes):
        obs = env.reset()
        obs_n = normalize_obs(obs, scales)
        done = False
        while not done:
            if total_steps < cfg.warmup_steps:
                u = rng.uniform(-1.0, 1.0, act_dim)
            else:
                u = agent.act_u(obs_n)
                u = np.clip(u + rng.normal(0.0, cfg.expl_noise, act_dim), -1.0, 1.0)
            next_obs, r, done, _ = env.step(u_to_action(u, f_max, i_max))
            next_obs_n = normalize_obs(next_obs, scales)
            buffer.add(obs_n, u, r, next_obs_n, float(done))
            obs_n = next_obs_n
            total_steps += 1

            if total_steps > cfg.warmup_steps and len(buffer) >= cfg.batch_size:
                agent.update(buffer, rng, step_index=total_steps)

            if total_steps % cfg.eval_period == 0:
                mean, std = _evaluate_agent_lockstep(eval_envs, agent, scales)
                curve.append((total_steps, mean, std))
    return curve, agent
