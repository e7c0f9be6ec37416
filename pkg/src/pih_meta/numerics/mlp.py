"""Fixed-architecture MLP forward and reverse-mode passes in float64 numpy.

There is no autodiff graph here on purpose: the suite only ever needs
gradients of MLPs (plus the Gaussian heads layered on top elsewhere), so the
backward pass is written out once and verified against finite differences.

Shapes follow the row convention: weight k is (out_k, in_k), a batched input
is (n, in_0), and ``mlp_forward`` accepts either a single vector or a batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractError

ACTIVATIONS = ("relu", "tanh", "identity")


def _act(name: str, a: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(a, 0.0)
    if name == "tanh":
        return np.tanh(a)
    if name == "identity":
        return a
    raise ContractError(f"unknown activation {name!r}")


def _act_deriv(name: str, a: np.ndarray) -> np.ndarray:
    """Derivative w.r.t. the pre-activation a."""
    if name == "relu":
        return (a > 0.0).astype(np.float64)
    if name == "tanh":
        t = np.tanh(a)
        return 1.0 - t * t
    if name == "identity":
        return np.ones_like(a)
    raise ContractError(f"unknown activation {name!r}")


@dataclass
class MlpParams:
    """Weights, biases and per-layer activation names of one MLP."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activations: list[str]

    def __post_init__(self) -> None:
        if not (len(self.weights) == len(self.biases) == len(self.activations)):
            raise ContractError("weights, biases, activations must have equal length")
        for k, (w, b, act) in enumerate(zip(self.weights, self.biases, self.activations)):
            if act not in ACTIVATIONS:
                raise ContractError(f"layer {k}: unknown activation {act!r}")
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ContractError(f"layer {k}: weight {w.shape} and bias {b.shape} do not agree")
            if k > 0 and w.shape[1] != self.weights[k - 1].shape[0]:
                raise ContractError(
                    f"layer {k}: in-dim {w.shape[1]} != previous out-dim "
                    f"{self.weights[k - 1].shape[0]}"
                )
        if not all(np.all(np.isfinite(a)) for a in self.weights + self.biases):
            raise ContractError("non-finite parameter entries")

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[0]

    @property
    def layer_dims(self) -> list[int]:
        return [self.in_dim] + [w.shape[0] for w in self.weights]

    def copy(self) -> "MlpParams":
        return MlpParams(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            list(self.activations),
        )

    def flat(self) -> np.ndarray:
        """All parameters concatenated into one vector (weights row-major, then bias, per layer)."""
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)

    def with_flat(self, vec: np.ndarray) -> "MlpParams":
        """Rebuild params from a flat vector produced by :meth:`flat`."""
        out_w, out_b, i = [], [], 0
        for w, b in zip(self.weights, self.biases):
            out_w.append(vec[i : i + w.size].reshape(w.shape).copy())
            i += w.size
            out_b.append(vec[i : i + b.size].copy())
            i += b.size
        if i != vec.size:
            raise ContractError("flat vector length does not match parameter count")
        return MlpParams(out_w, out_b, list(self.activations))


@dataclass
class GradBundle:
    """Gradients shape-congruent with an :class:`MlpParams`, plus the input gradient."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    input_grad: np.ndarray | None = None

    def flat(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)

    def add_(self, other: "GradBundle") -> "GradBundle":
        """In-place accumulate another bundle (input_grad is not accumulated)."""
        for a, b in zip(self.weights, other.weights):
            a += b
        for a, b in zip(self.biases, other.biases):
            a += b
        return self

    def scale_(self, s: float) -> "GradBundle":
        for a in self.weights:
            a *= s
        for a in self.biases:
            a *= s
        return self


def zeros_like_grads(params: MlpParams) -> GradBundle:
    return GradBundle(
        [np.zeros_like(w) for w in params.weights],
        [np.zeros_like(b) for b in params.biases],
    )


def init_mlp(
    layer_dims: list[int],
    activations: list[str],
    rng: np.random.Generator,
) -> MlpParams:
    """Seeded uniform init in +-1/sqrt(fan_in) per layer."""
    if len(activations) != len(layer_dims) - 1:
        raise ContractError("need one activation per layer")
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return MlpParams(weights, biases, list(activations))


def make_mlp(
    in_dim: int,
    hidden: list[int],
    out_dim: int,
    rng: np.random.Generator,
    hidden_activation: str = "relu",
    output_activation: str = "identity",
) -> MlpParams:
    dims = [in_dim] + list(hidden) + [out_dim]
    acts = [hidden_activation] * len(hidden) + [output_activation]
    return init_mlp(dims, acts, rng)


def _check_input(params: MlpParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (1, 2) or x.shape[-1] != params.in_dim:
        raise ContractError(
            f"input of shape {x.shape} does not match network in-dim {params.in_dim}"
        )
    return x


def mlp_forward(params: MlpParams, x: np.ndarray) -> np.ndarray:
    """Evaluate the network. x is (in,) or (n, in); output matches."""
    x = _check_input(params, x)
    h = x
    for w, b, act in zip(params.weights, params.biases, params.activations):
        h = _act(act, h @ w.T + b)
    return h


def _forward_cached(params: MlpParams, x: np.ndarray):
    """Forward pass keeping layer inputs and pre-activations for backward."""
    inputs, preacts = [], []
    h = x
    for w, b, act in zip(params.weights, params.biases, params.activations):
        inputs.append(h)
        a = h @ w.T + b
        preacts.append(a)
        h = _act(act, a)
    return h, inputs, preacts


def mlp_backward(params: MlpParams, x: np.ndarray, upstream_grad: np.ndarray) -> GradBundle:
    """Reverse-mode gradients of (upstream_grad . output) w.r.t. params and input.

    For a batch, upstream_grad is (n, out) and parameter gradients are summed
    over the batch; ``input_grad`` keeps the batch shape.
    """
    x = _check_input(params, x)
    g = np.asarray(upstream_grad, dtype=np.float64)
    if g.shape[-1] != params.out_dim or g.ndim != x.ndim:
        raise ContractError(
            f"upstream grad of shape {g.shape} does not match output dim "
            f"{params.out_dim} and input rank"
        )
    batched = x.ndim == 2
    xb = x if batched else x[None, :]
    gb = g if batched else g[None, :]

    _, inputs, preacts = _forward_cached(params, xb)
    d_w = [None] * len(params.weights)
    d_b = [None] * len(params.biases)
    delta = gb
    for k in range(len(params.weights) - 1, -1, -1):
        delta = delta * _act_deriv(params.activations[k], preacts[k])
        d_w[k] = delta.T @ inputs[k]
        d_b[k] = delta.sum(axis=0)
        delta = delta @ params.weights[k]
    input_grad = delta if batched else delta[0]
    return GradBundle(d_w, d_b, input_grad)
