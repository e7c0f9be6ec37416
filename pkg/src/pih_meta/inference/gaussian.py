"""Diagonal-Gaussian latent algebra: factor products, KL, densities, sampling.

Every operation that participates in a training loss has a matching
``*_backward`` returning exact partial derivatives, verified against finite
differences in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ContractError

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class DiagGaussian:
    """Mean and elementwise variance over the latent space."""

    mean: np.ndarray
    variance: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.variance = np.asarray(self.variance, dtype=np.float64)
        if self.mean.shape != self.variance.shape or self.mean.ndim != 1:
            raise ContractError("mean and variance must be 1-d and the same length")
        if not np.all(self.variance > 0.0):
            raise ContractError("variance must be strictly positive")

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def copy(self) -> "DiagGaussian":
        return DiagGaussian(self.mean.copy(), self.variance.copy())


def standard_normal(dim: int) -> DiagGaussian:
    return DiagGaussian(np.zeros(dim), np.ones(dim))


def posterior(factors: Sequence[DiagGaussian], prior: DiagGaussian) -> DiagGaussian:
    """Precision-weighted product of the factors; the prior only backstops an empty list."""
    if len(factors) == 0:
        return prior.copy()
    dim = prior.dim
    if any(f.dim != dim for f in factors):
        raise ContractError("factor dimensionality mismatch")
    means = np.stack([f.mean for f in factors])
    variances = np.stack([f.variance for f in factors])
    return posterior_from_arrays(means, variances)


def posterior_from_arrays(means: np.ndarray, variances: np.ndarray) -> DiagGaussian:
    """Product of row-wise factors given as (n, dim) arrays.

    Columns are reduced with exact summation so the product is bitwise
    invariant under factor permutation.
    """
    prec_rows = 1.0 / variances
    weighted_rows = means * prec_rows
    dim = means.shape[1]
    precision = np.array([math.fsum(prec_rows[:, d]) for d in range(dim)])
    weighted = np.array([math.fsum(weighted_rows[:, d]) for d in range(dim)])
    var = 1.0 / precision
    return DiagGaussian(weighted * var, var)


def posterior_backward(
    means: np.ndarray,
    variances: np.ndarray,
    post: DiagGaussian,
    d_mean: np.ndarray,
    d_var: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Backprop (d_mean, d_var) on the product through to every factor.

    With S = sum mu_k/v_k and P = sum 1/v_k so mu = S/P, V = 1/P:
      d mu / d mu_k = V / v_k
      d mu / d v_k  = V (mu - mu_k) / v_k^2
      d V  / d v_k  = V^2 / v_k^2
    Returns (d_means, d_variances) with the factors' (n, dim) shape.
    """
    v_post = post.variance
    d_means = d_mean[None, :] * (v_post / variances)
    d_variances = (
        d_mean[None, :] * v_post * (post.mean[None, :] - means) / variances**2
        + d_var[None, :] * (v_post**2) / variances**2
    )
    return d_means, d_variances


def sample(g: DiagGaussian, rng: np.random.Generator) -> np.ndarray:
    return g.mean + np.sqrt(g.variance) * rng.standard_normal(g.dim)


def sample_reparam(g: DiagGaussian, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """z = mean + sqrt(variance) * eps, returning eps so gradients can flow."""
    eps = rng.standard_normal(g.dim)
    return g.mean + np.sqrt(g.variance) * eps, eps


def reparam_backward(
    g: DiagGaussian, eps: np.ndarray, d_z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(d_mean, d_var) of a loss given its gradient w.r.t. z = mean + sqrt(var) * eps."""
    return d_z.copy(), d_z * eps / (2.0 * np.sqrt(g.variance))


def kl_divergence(p: DiagGaussian, q: DiagGaussian) -> float:
    """Closed-form KL(p || q) for diagonal Gaussians."""
    if p.dim != q.dim:
        raise ContractError("KL requires equal dimensionality")
    ratio = p.variance / q.variance
    delta = p.mean - q.mean
    return float(0.5 * np.sum(np.log(q.variance) - np.log(p.variance) + ratio
                              + delta * delta / q.variance - 1.0))


def kl_backward(
    p: DiagGaussian, q: DiagGaussian
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Partials of KL(p || q): (d_mu_p, d_var_p, d_mu_q, d_var_q)."""
    delta = p.mean - q.mean
    d_mu_p = delta / q.variance
    d_var_p = 0.5 * (1.0 / q.variance - 1.0 / p.variance)
    d_mu_q = -delta / q.variance
    d_var_q = 0.5 * (1.0 / q.variance
                     - (p.variance + delta * delta) / q.variance**2)
    return d_mu_p, d_var_p, d_mu_q, d_var_q


def log_density(g: DiagGaussian, z: np.ndarray) -> float:
    z = np.asarray(z, dtype=np.float64)
    if z.shape != g.mean.shape:
        raise ContractError("z dimensionality mismatch")
    delta = z - g.mean
    return float(-0.5 * np.sum(LOG_2PI + np.log(g.variance) + delta * delta / g.variance))


def log_density_backward(
    g: DiagGaussian, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Partials of log N(z; mean, var): (d_mean, d_var, d_z)."""
    delta = z - g.mean
    d_mean = delta / g.variance
    d_var = -0.5 / g.variance + 0.5 * delta * delta / g.variance**2
    return d_mean, d_var, -d_mean
