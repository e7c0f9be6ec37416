"""Context encoders: per-tuple Gaussian factors from an MLP trunk.

The trunk maps one context tuple to 2 * latent_dim outputs, split into a mean
half and a raw-variance half; variance goes through softplus plus a floor so
the factor product can never hit a degenerate precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractError
from ..numerics import GradBundle, MlpParams, make_mlp, mlp_backward, mlp_forward
from .gaussian import DiagGaussian, posterior_from_arrays

VARIANCE_FLOOR = 1e-6


@dataclass
class ContextBatch:
    """Context tuples stacked row-wise, tagged with their aux channel (r, m or f)."""

    inputs: np.ndarray
    channel: str

    def __post_init__(self) -> None:
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        if self.inputs.ndim != 2:
            raise ContractError("context batch must be a 2-d array of tuples")

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass
class EncoderHead:
    """MLP trunk whose output splits into (mean, raw variance) halves."""

    trunk: MlpParams
    latent_dim: int
    variance_floor: float = VARIANCE_FLOOR

    def __post_init__(self) -> None:
        if self.trunk.out_dim != 2 * self.latent_dim:
            raise ContractError("trunk out-dim must be 2 * latent_dim")

    @property
    def input_dim(self) -> int:
        return self.trunk.in_dim

    def copy(self) -> "EncoderHead":
        return EncoderHead(self.trunk.copy(), self.latent_dim, self.variance_floor)


def make_encoder(
    input_dim: int,
    latent_dim: int,
    hidden: list[int],
    rng: np.random.Generator,
    hidden_activation: str = "relu",
) -> EncoderHead:
    trunk = make_mlp(input_dim, hidden, 2 * latent_dim, rng, hidden_activation)
    return EncoderHead(trunk, latent_dim)


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def encode_factor_arrays(encoder: EncoderHead, inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor means and variances as (n, latent_dim) arrays, order-preserving."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if inputs.shape[1] != encoder.input_dim:
        raise ContractError(
            f"context tuples of arity {inputs.shape[1]} do not match encoder "
            f"input dim {encoder.input_dim}"
        )
    out = mlp_forward(encoder.trunk, inputs)
    means = out[:, : encoder.latent_dim]
    raw = out[:, encoder.latent_dim :]
    variances = _softplus(raw) + encoder.variance_floor
    return means, variances


def encode_factors(encoder: EncoderHead, batch: ContextBatch) -> list[DiagGaussian]:
    means, variances = encode_factor_arrays(encoder, batch.inputs)
    return [DiagGaussian(m, v) for m, v in zip(means, variances)]


def encode_posterior(encoder: EncoderHead, inputs: np.ndarray) -> DiagGaussian:
    """Factor product over a whole tuple array in one call."""
    means, variances = encode_factor_arrays(encoder, inputs)
    return posterior_from_arrays(means, variances)


def encoder_backward(
    encoder: EncoderHead,
    inputs: np.ndarray,
    d_means: np.ndarray,
    d_variances: np.ndarray,
) -> GradBundle:
    """Backprop per-factor (d_mean, d_var) rows into trunk parameter gradients."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    out = mlp_forward(encoder.trunk, inputs)
    raw = out[:, encoder.latent_dim :]
    upstream = np.concatenate([d_means, d_variances * _sigmoid(raw)], axis=1)
    return mlp_backward(encoder.trunk, inputs, upstream)
