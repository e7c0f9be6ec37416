"""Bias-corrected adaptive-moment optimizer over MlpParams-shaped values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError
from .mlp import GradBundle, MlpParams


@dataclass
class AdamState:
    """Moments shape-congruent with the parameters (weights then biases), plus hyperparameters."""

    first_moment: list[np.ndarray]
    second_moment: list[np.ndarray]
    step_count: int = 0
    learning_rate: float = 3e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


def init_adam(params: MlpParams, learning_rate: float = 3e-4, **kw) -> AdamState:
    zeros = [np.zeros_like(a) for a in params.weights + params.biases]
    return AdamState(
        first_moment=zeros,
        second_moment=[np.zeros_like(a) for a in params.weights + params.biases],
        learning_rate=learning_rate,
        **kw,
    )


def adam_step(
    state: AdamState, params: MlpParams, grads: GradBundle
) -> tuple[MlpParams, AdamState]:
    """One standard Adam update; returns new params and state, inputs untouched."""
    values = params.weights + params.biases
    gs = grads.weights + grads.biases
    for g, val in zip(gs, values):
        if g.shape != val.shape:
            raise ContractError("gradient shapes do not match parameters")
        if not np.all(np.isfinite(g)):
            raise ContractError("non-finite gradient entries")

    b1, b2, eps, lr = state.beta1, state.beta2, state.epsilon, state.learning_rate
    t = state.step_count + 1
    n_layers = len(params.weights)
    new_vals, new_m, new_v = [], [], []
    for val, g, m, v in zip(values, gs, state.first_moment, state.second_moment):
        m2 = b1 * m + (1.0 - b1) * g
        v2 = b2 * v + (1.0 - b2) * g * g
        m_hat = m2 / (1.0 - b1 ** t)
        v_hat = v2 / (1.0 - b2 ** t)
        new_vals.append(val - lr * m_hat / (np.sqrt(v_hat) + eps))
        new_m.append(m2)
        new_v.append(v2)
    new_params = MlpParams(new_vals[:n_layers], new_vals[n_layers:], list(params.activations))
    new_state = AdamState(new_m, new_v, t, lr, b1, b2, eps)
    return new_params, new_state


class MlpAdam:
    """Stateful convenience wrapper used by the training loops."""

    def __init__(self, params: MlpParams, learning_rate: float = 3e-4, **kw):
        self.state = init_adam(params, learning_rate, **kw)

    @property
    def step_count(self) -> int:
        return self.state.step_count

    def step(self, params: MlpParams, grads: GradBundle) -> MlpParams:
        new_params, self.state = adam_step(self.state, params, grads)
        return new_params


class ScalarAdam:
    """Adam on a single scalar (the entropy temperature's log-alpha)."""

    def __init__(self, learning_rate: float = 3e-4, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        self.m = 0.0
        self.v = 0.0
        self.t = 0
        self.lr = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = epsilon

    def step(self, x: float, g: float) -> float:
        if not np.isfinite(g):
            raise ContractError("non-finite gradient entries")
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * g
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * g * g
        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)
        return x - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
