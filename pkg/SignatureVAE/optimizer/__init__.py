from .adam import NonFiniteGradientError, step
from .train import (
    AbortedEpochWarning,
    kl_anneal_weight,
    train,
    training_matrix,
)


__all__ = [
    "NonFiniteGradientError", "step",
    "AbortedEpochWarning", "kl_anneal_weight",
    "train", "training_matrix",
]
