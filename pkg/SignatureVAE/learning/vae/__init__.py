from .params import PARAM_BLOCKS, VaeConfig, VaeParams, init_params
from .vae import (
    LOGVAR_CLIP,
    LatentCode,
    LossBreakdown,
    backward,
    batch_loss,
    decode,
    encode,
    generate,
    kl_divergence,
    kl_per_dim,
    loss,
    reconstruct,
    reconstruction_error,
    reconstruction_errors,
    reparameterize,
    sample_prior,
    value_and_grad,
)
from .checkpoint import (
    CheckpointError,
    checkpoint_bytes,
    load_checkpoint,
    params_from_bytes,
    read_history_csv,
    save_checkpoint,
    write_history_csv,
)

__all__ = (
    "PARAM_BLOCKS",
    "VaeConfig",
    "VaeParams",
    "init_params",
    "LOGVAR_CLIP",
    "LatentCode",
    "LossBreakdown",
    "backward",
    "batch_loss",
    "decode",
    "encode",
    "generate",
    "kl_divergence",
    "kl_per_dim",
    "loss",
    "reconstruct",
    "reconstruction_error",
    "reconstruction_errors",
    "reparameterize",
    "sample_prior",
    "value_and_grad",
    "CheckpointError",
    "checkpoint_bytes",
    "load_checkpoint",
    "params_from_bytes",
    "read_history_csv",
    "save_checkpoint",
    "write_history_csv",
)
