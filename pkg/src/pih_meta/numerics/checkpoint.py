"""Versioned JSON checkpoints for networks.

Floats go through Python's shortest-round-trip repr, so a save/load cycle is
bit-exact for every finite float64.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ContractError
from .mlp import MlpParams

FORMAT_VERSION = 1


def mlp_to_dict(params: MlpParams) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "architecture": {
            "layer_dims": params.layer_dims,
            "activations": list(params.activations),
        },
        "weights": [w.tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
    }


def mlp_from_dict(doc: dict) -> MlpParams:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ContractError(f"unsupported checkpoint format_version {version!r}")
    arch = doc["architecture"]
    dims = arch["layer_dims"]
    weights = [np.asarray(w, dtype=np.float64) for w in doc["weights"]]
    biases = [np.asarray(b, dtype=np.float64) for b in doc["biases"]]
    params = MlpParams(weights, biases, list(arch["activations"]))
    if params.layer_dims != list(dims):
        raise ContractError("checkpoint architecture does not match stored arrays")
    return params


def save_mlp(params: MlpParams, path: str | Path) -> None:
    Path(path).write_text(json.dumps(mlp_to_dict(params), sort_keys=True))


def load_mlp(path: str | Path) -> MlpParams:
    return mlp_from_dict(json.loads(Path(path).read_text()))
