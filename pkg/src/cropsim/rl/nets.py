"""Small feedforward networks with hand-written backpropagation.

Plain numpy, rectified hidden layers, and an optional tanh output squash.
The forward pass caches every activation so the backward pass can return
exact analytic gradients for all weights, biases, and the input itself
(the input gradient is what lets a policy gradient flow through a critic).
"""

from __future__ import annotations

import numpy as np


class Mlp:
    """Fully-connected network: sizes[0] -> ... -> sizes[-1].

    Hidden activations are ReLU; the output is tanh-squashed when
    out_activation == "tanh", otherwise linear. Weights are initialized
    uniform on +/- 1/sqrt(fan_in) from the given stream.
    """

    def __init__(
        self,
        sizes: list[int],
        out_activation: str = "linear",
        rng: np.random.Generator | None = None,
        dtype=np.float64,
    ):
        if len(sizes) < 2:
            raise ValueError("need at least an input and an output layer")
        if out_activation not in ("linear", "tanh"):
            raise ValueError(f"unknown out_activation {out_activation!r}")
        self.sizes = list(sizes)
        self.out_activation = out_activation
        self.dtype = np.dtype(dtype)
        rng = rng or np.random.default_rng(0)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            self.weights.append(rng.uniform(-bound, bound, (fan_in, fan_out)).astype(self.dtype))
            self.biases.append(rng.uniform(-bound, bound, fan_out).astype(self.dtype))

    @property
    def params(self) -> list[np.ndarray]:
        """Flat parameter list, alternating weight and bias per layer."""
        flat = []
        for w, b in zip(self.weights, self.biases):
            flat.append(w)
            flat.append(b)
        return flat

    def set_params(self, flat: list[np.ndarray]) -> None:
        for i in range(len(self.weights)):
            self.weights[i] = flat[2 * i].astype(self.dtype, copy=True)
            self.biases[i] = flat[2 * i + 1].astype(self.dtype, copy=True)

    def copy(self) -> "Mlp":
        clone = Mlp.__new__(Mlp)
        clone.sizes = list(self.sizes)
        clone.out_activation = self.out_activation
        clone.dtype = self.dtype
        clone.weights = [w.copy() for w in self.weights]
        clone.biases = [b.copy() for b in self.biases]
        return clone

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
        """Run the network; returns (output, cache of activations).

        x has shape (batch, sizes[0]); a single vector is also accepted.
        """
        x = np.asarray(x, dtype=self.dtype)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[None, :]
        if x.shape[1] != self.sizes[0]:
            raise ValueError(f"input width {x.shape[1]} != expected {self.sizes[0]}")
        acts = [x]
        a = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ w
            z += b
            if i < last:
                a = np.maximum(z, 0.0)
            elif self.out_activation == "tanh":
                a = np.tanh(z)
            else:
                a = z
            acts.append(a)
        out = acts[-1][0] if squeeze else acts[-1]
        return out, acts

    def backward(
        self, cache: list[np.ndarray], upstream: np.ndarray
    ) -> tuple[list[np.ndarray], np.ndarray]:
        """Backpropagate d(loss)/d(output); returns (grads, d(loss)/d(input)).

        grads matches the layout of `params`. The cache must come from the
        matching forward() call.
        """
        upstream = np.asarray(upstream, dtype=self.dtype)
        if upstream.ndim == 1:
            upstream = upstream[None, :]
        out = cache[-1]
        if upstream.shape != out.shape:
            raise ValueError(f"upstream shape {upstream.shape} != output shape {out.shape}")
        if self.out_activation == "tanh":
            delta = upstream * (1.0 - out * out)
        else:
            delta = upstream
        grads: list[np.ndarray] = [None] * (2 * len(self.weights))
        for i in range(len(self.weights) - 1, -1, -1):
            a_prev = cache[i]
            grads[2 * i] = a_prev.T @ delta
            grads[2 * i + 1] = delta.sum(axis=0)
            delta = delta @ self.weights[i].T
            if i > 0:
                # ReLU mask: the cached activation is already max(z, 0)
                delta = delta * (cache[i] > 0.0)
        return grads, delta


class Adam:
    """Adaptive-moment optimizer over a flat parameter list (updates in place)."""

    def __init__(self, params: list[np.ndarray], lr: float = 3e-4,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        self.t += 1
        b1t = 1.0 - self.beta1 ** self.t
        b2t = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p -= self.lr * (m / b1t) / (np.sqrt(v / b2t) + self.eps)


def soft_update(target: Mlp, online: Mlp, tau: float) -> None:
    """Move target parameters to exactly tau * online + (1 - tau) * target."""
    for wt, w in zip(target.weights, online.weights):
        wt[...] = tau * w + (1.0 - tau) * wt
    for bt, b in zip(target.biases, online.biases):
        bt[...] = tau * b + (1.0 - tau) * bt
