from .encoder import (
    VARIANCE_FLOOR,
    ContextBatch,
    EncoderHead,
    encode_factor_arrays,
    encode_factors,
    encode_posterior,
    encoder_backward,
    make_encoder,
)
from .gaussian import (
    DiagGaussian,
    kl_backward,
    kl_divergence,
    log_density,
    log_density_backward,
    posterior,
    posterior_backward,
    posterior_from_arrays,
    reparam_backward,
    sample,
    sample_reparam,
    standard_normal,
)

__all__ = [
    "VARIANCE_FLOOR",
    "ContextBatch",
    "DiagGaussian",
    "EncoderHead",
    "encode_factor_arrays",
    "encode_factors",
    "encode_posterior",
    "encoder_backward",
    "kl_backward",
    "kl_divergence",
    "log_density",
    "log_density_backward",
    "make_encoder",
    "posterior",
    "posterior_backward",
    "posterior_from_arrays",
    "reparam_backward",
    "sample",
    "sample_reparam",
    "standard_normal",
]
