"""Central finite-difference verification for the hand-written backward passes."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .mlp import MlpParams


def finite_difference(f: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function at x."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    flat = x.ravel()
    gf = g.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = f(x)
        flat[i] = orig - h
        fm = f(x)
        flat[i] = orig
        gf[i] = (fp - fm) / (2.0 * h)
    return g


def mlp_finite_difference(
    loss: Callable[[MlpParams], float], params: MlpParams, h: float = 1e-5
) -> np.ndarray:
    """Central-difference gradient of a scalar loss w.r.t. the flattened params."""
    base = params.flat()

    def f(vec: np.ndarray) -> float:
        return float(loss(params.with_flat(vec)))

    return finite_difference(f, base, h)


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> float:
    """max |a - n| / max(|a|, |n|, floor), elementwise; the gradcheck metric."""
    a = np.asarray(analytic, dtype=np.float64).ravel()
    n = np.asarray(numeric, dtype=np.float64).ravel()
    denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
    return float(np.max(np.abs(a - n) / denom))
