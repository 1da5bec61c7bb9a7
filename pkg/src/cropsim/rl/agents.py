"""Deterministic-policy actor-critic learners (DDPG and its twin-critic variant).

Both hold an actor mapping states to squashed actions in [-1, 1]^2 and one
or two critics scoring (state, action) pairs; slowly-tracking target copies
stabilize the bootstrap targets. Updates are single gradient steps per call,
driven entirely by the caller's seeded stream, so a training run is fully
reproducible.
"""

from __future__ import annotations

import json

import numpy as np

from .nets import Adam, Mlp, soft_update
from .replay import ReplayBuffer


class TrainHyperparams:
    """Shared update hyperparameters (see training.TrainConfig for the full run config)."""

    def __init__(self, discount=0.99, tau=0.005, actor_lr=3e-4, critic_lr=3e-4,
                 batch_size=256, policy_noise=0.2, noise_clip=0.5, policy_delay=2):
        self.discount = discount
        self.tau = tau
        self.actor_lr = actor_lr
        self.critic_lr = critic_lr
        self.batch_size = batch_size
        self.policy_noise = policy_noise
        self.noise_clip = noise_clip
        self.policy_delay = policy_delay


class DdpgAgent:
    """Deep deterministic policy gradient with target networks."""

    algo = "ddpg"

    def __init__(self, obs_dim: int, act_dim: int, hp: TrainHyperparams | None = None,
                 hidden: tuple[int, int] = (256, 256), seed: int = 0, dtype=np.float32):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.hp = hp or TrainHyperparams()
        self.dtype = np.dtype(dtype)
        rng = np.random.default_rng(np.random.SeedSequence([seed, 101]))
        self.actor = Mlp([obs_dim, *hidden, act_dim], "tanh", rng, dtype)
        self.critic = Mlp([obs_dim + act_dim, *hidden, 1], "linear", rng, dtype)
        self.actor_target = self.actor.copy()
        self.critic_target = self.critic.copy()
        self.actor_opt = Adam(self.actor.params, lr=self.hp.actor_lr)
        self.critic_opt = Adam(self.critic.params, lr=self.hp.critic_lr)

    def act_u(self, obs: np.ndarray) -> np.ndarray:
        """Greedy squashed action for one observation (or a batch)."""
        out, _ = self.actor.forward(np.asarray(obs, dtype=self.dtype))
        return out

    def _critic_step(self, critic: Mlp, opt: Adam, s, a, y) -> float:
        x = np.concatenate([s, a], axis=1)
        q, cache = critic.forward(x)
        err = q - y
        loss = float(np.mean(err * err))
        grads, _ = critic.backward(cache, (2.0 / err.shape[0]) * err)
        opt.step(critic.params, grads)
        return loss

    def _actor_step(self, s) -> float:
        u, actor_cache = self.actor.forward(s)
        x = np.concatenate([s, u], axis=1)
        q, critic_cache = self.critic.forward(x)
        batch = s.shape[0]
        # Ascend mean Q: feed -1/B upstream, then one optimizer step downhill.
        _, dx = self.critic.backward(critic_cache, np.full_like(q, -1.0 / batch))
        grads, _ = self.actor.backward(actor_cache, dx[:, self.obs_dim:])
        self.actor_opt.step(self.actor.params, grads)
        return float(np.mean(q))

    def update(self, buffer: ReplayBuffer, rng: np.random.Generator,
               step_index: int = 0) -> dict[str, float]:
        """One critic step, one actor step, then soft target updates."""
        s, a, r, s2, done = buffer.sample(self.hp.batch_size, rng)
        a2, _ = self.actor_target.forward(s2)
        q2, _ = self.critic_target.forward(np.concatenate([s2, a2], axis=1))
        y = (r + self.hp.discount * (1.0 - done) * q2[:, 0])[:, None].astype(self.dtype)

        critic_loss = self._critic_step(self.critic, self.critic_opt, s, a, y)
        actor_q = self._actor_step(s)

        soft_update(self.actor_target, self.actor, self.hp.tau)
        soft_update(self.critic_target, self.critic, self.hp.tau)
        return {"critic_loss": critic_loss, "actor_q": actor_q}

    def _net_map(self) -> dict[str, Mlp]:
        return {
            "actor": self.actor,
            "critic": self.critic,
            "actor_target": self.actor_target,
            "critic_target": self.critic_target,
        }

    def save(self, path) -> None:
        save_nets(path, self.algo, self._net_map())

    def load(self, path) -> None:
        load_nets(path, self.algo, self._net_map())


class Td3Agent(DdpgAgent):
    """Twin critics, smoothed bootstrap targets, and delayed policy updates."""

    algo = "td3"

    def __init__(self, obs_dim: int, act_dim: int, hp: TrainHyperparams | None = None,
                 hidden: tuple[int, int] = (256, 256), seed: int = 0, dtype=np.float32):
        super().__init__(obs_dim, act_dim, hp, hidden, seed, dtype)
        rng = np.random.default_rng(np.random.SeedSequence([seed, 202]))
        self.critic2 = Mlp([obs_dim + act_dim, *hidden, 1], "linear", rng, dtype)
        self.critic2_target = self.critic2.copy()
        self.critic2_opt = Adam(self.critic2.params, lr=self.hp.critic_lr)

    def target_action(self, s2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Target-policy action with clipped exploration smoothing noise."""
        a2, _ = self.actor_target.forward(s2)
        noise = rng.normal(0.0, self.hp.policy_noise, a2.shape).astype(self.dtype)
        np.clip(noise, -self.hp.noise_clip, self.hp.noise_clip, out=noise)
        return np.clip(a2 + noise, -1.0, 1.0)

    def update(self, buffer: ReplayBuffer, rng: np.random.Generator,
               step_index: int = 0) -> dict[str, float]:
        """Both critics step every call; actor and targets only on delay steps."""
        s, a, r, s2, done = buffer.sample(self.hp.batch_size, rng)
        a2 = self.target_action(s2, rng)
        x2 = np.concatenate([s2, a2], axis=1)
        q2a, _ = self.critic_target.forward(x2)
        q2b, _ = self.critic2_target.forward(x2)
        q2 = np.minimum(q2a, q2b)
        y = (r + self.hp.discount * (1.0 - done) * q2[:, 0])[:, None].astype(self.dtype)

        critic_loss = self._critic_step(self.critic, self.critic_opt, s, a, y)
        critic_loss += self._critic_step(self.critic2, self.critic2_opt, s, a, y)

        diag = {"critic_loss": critic_loss}
        if step_index % self.hp.policy_delay == 0:
            diag["actor_q"] = self._actor_step(s)
            soft_update(self.actor_target, self.actor, self.hp.tau)
            soft_update(self.critic_target, self.critic, self.hp.tau)
            soft_update(self.critic2_target, self.critic2, self.hp.tau)
        return diag

    def _net_map(self) -> dict[str, Mlp]:
        nets = super()._net_map()
        nets["critic2"] = self.critic2
        nets["critic2_target"] = self.critic2_target
        return nets


def save_nets(path, algo: str, nets: dict[str, Mlp]) -> None:
    """Serialize named networks to one .npz archive (exact round-trip)."""
    arrays: dict[str, np.ndarray] = {}
    meta = {"algo": algo, "nets": {}}
    for name, net in nets.items():
        meta["nets"][name] = {"sizes": net.sizes, "out_activation": net.out_activation}
        for i, (w, b) in enumerate(zip(net.weights, net.biases)):
            arrays[f"{name}.w{i}"] = w
            arrays[f"{name}.b{i}"] = b
    arrays["meta"] = np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)
    np.savez(path, **arrays)


def load_nets(path, algo: str, nets: dict[str, Mlp]) -> None:
    """Restore networks saved by save_nets; shapes and algo must match."""
    with np.load(path) as data:
        meta = json.loads(bytes(data["meta"]).decode())
        if meta["algo"] != algo:
            raise ValueError(f"parameter file is for {meta['algo']!r}, expected {algo!r}")
        for name, net in nets.items():
            if meta["nets"][name]["sizes"] != net.sizes:
                raise ValueError(f"{name}: stored sizes {meta['nets'][name]['sizes']} != {net.sizes}")
            for i in range(len(net.weights)):
                net.weights[i] = data[f"{name}.w{i}"].astype(net.dtype)
                net.biases[i] = data[f"{name}.b{i}"].astype(net.dtype)


def make_agent(algo: str, obs_dim: int, act_dim: int, hp: TrainHyperparams | None = None,
               seed: int = 0) -> DdpgAgent:
    if algo == "ddpg":
        return DdpgAgent(obs_dim, act_dim, hp, seed=seed)
    if algo == "td3":
        return Td3Agent(obs_dim, act_dim, hp, seed=seed)
    raise ValueError(f"unknown algorithm {algo!r}; expected 'ddpg' or 'td3'")
