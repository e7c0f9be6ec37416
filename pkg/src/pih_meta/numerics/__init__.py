from .adam import AdamState, MlpAdam, ScalarAdam, adam_step, init_adam
from .checkpoint import load_mlp, mlp_from_dict, mlp_to_dict, save_mlp
from .gradcheck import finite_difference, max_relative_error, mlp_finite_difference
from .mlp import (
    ACTIVATIONS,
    GradBundle,
    MlpParams,
    init_mlp,
    make_mlp,
    mlp_backward,
    mlp_forward,
    zeros_like_grads,
)

__all__ = [
    "ACTIVATIONS",
    "AdamState",
    "GradBundle",
    "MlpAdam",
    "MlpParams",
    "ScalarAdam",
    "adam_step",
    "finite_difference",
    "init_adam",
    "init_mlp",
    "load_mlp",
    "make_mlp",
    "max_relative_error",
    "mlp_backward",
    "mlp_finite_difference",
    "mlp_forward",
    "mlp_from_dict",
    "mlp_to_dict",
    "save_mlp",
    "zeros_like_grads",
]
