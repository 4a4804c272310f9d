from dataclasses import dataclass, asdict, field
from typing import Dict, Optional

import numpy as np

from ...utils import get_random_generator

# Order in which blocks are initialised, updated and serialised.
PARAM_BLOCKS = (
    "enc_W1",
    "enc_b1",
    "W_mu",
    "b_mu",
    "W_logvar",
    "b_logvar",
    "dec_W1",
    "dec_b1",
    "dec_W2",
    "dec_b2",
)
ANNEAL_MODES = ("none", "linear")


@dataclass(frozen=True)
class VaeConfig:
    """
    Shape and training settings of a VAE.

    Parameters
    ----------
    * `input_dim` [int]:
        Number of pixels of a flattened input image.

    * `intermediate_dim` [int, default=512]:
        Width of the single hidden layer on each side.

    * `latent_dim` [int, default=256]:
        Size of the latent code. 64 is used for classification features and
        5 for disentanglement sweeps.

    * `beta` [float, default=1.0]:
        Weight of the KL term.

    * `learning_rate` [float, default=1e-3]:
        Adam step size.

    * `epochs` [int, default=100]:
        Number of passes over the training set.

    * `batch_size` [int, default=32]:
        Mini-batch size.

    * `seed` [int, default=0]:
        Seed of initialisation, shuffling and noise draws.

    * `anneal` ["none" or "linear", default="none"]:
        KL weight schedule. "linear" ramps from 0 to `beta` over
        `anneal_epochs` epochs.

    * `anneal_epochs` [int, default=0]:
        Length of the linear ramp.
    """

    input_dim: int
    intermediate_dim: int = 512
    latent_dim: int = 256
    beta: float = 1.0
    learning_rate: float = 1e-3
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0
    anneal: str = "none"
    anneal_epochs: int = 0

    def __post_init__(self):
        for name in ("input_dim", "intermediate_dim", "latent_dim", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(
                    "Expected `%s` >= 1, got %r" % (name, getattr(self, name))
                )
        if self.epochs < 0:
            raise ValueError("Expected `epochs` >= 0, got %r" % self.epochs)
        if not self.beta >= 0:
            raise ValueError("Expected `beta` >= 0, got %r" % self.beta)
        if not self.learning_rate > 0:
            raise ValueError(
                "Expected `learning_rate` > 0, got %r" % self.learning_rate
            )
        if self.seed < 0:
            raise ValueError("Expected `seed` >= 0, got %r" % self.seed)
        if self.anneal not in ANNEAL_MODES:
            raise ValueError(
                "Expected `anneal` in %s, got %r" % (ANNEAL_MODES, self.anneal)
            )
        if self.anneal == "linear" and self.anneal_epochs < 1:
            raise ValueError(
                "Linear annealing needs `anneal_epochs` >= 1, got %r"
                % self.anneal_epochs
            )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def replace(self, **changes) -> "VaeConfig":
        d = self.to_dict()
        d.update(changes)
        return VaeConfig(**d)

    def block_shapes(self) -> Dict[str, tuple]:
        D, H, L = self.input_dim, self.intermediate_dim, self.latent_dim
        return {
            "enc_W1": (D, H),
            "enc_b1": (H,),
            "W_mu": (H, L),
            "b_mu": (L,),
            "W_logvar": (H, L),
            "b_logvar": (L,),
            "dec_W1": (L, H),
            "dec_b1": (H,),
            "dec_W2": (H, D),
            "dec_b2": (D,),
        }


@dataclass
class VaeParams:
    """
    Encoder and decoder weights plus the Adam moment estimates.

    `weights`, `m` and `v` map block names (see `PARAM_BLOCKS`) to arrays;
    `t` counts the optimizer steps taken. Weight matrices are laid out
    (fan_in, fan_out) so a batch of row vectors is transformed by
    `X @ W + b`.
    """

    config: VaeConfig
    weights: Dict[str, np.ndarray]
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0

    def __post_init__(self):
        shapes = self.config.block_shapes()
        for name in PARAM_BLOCKS:
            if name not in self.weights:
                raise ValueError("Missing parameter block %r" % name)
            if self.weights[name].shape != shapes[name]:
                raise ValueError(
                    "Block %r has shape %s, expected %s"
                    % (name, self.weights[name].shape, shapes[name])
                )
            self.m.setdefault(name, np.zeros(shapes[name]))
            self.v.setdefault(name, np.zeros(shapes[name]))

    def __getitem__(self, name) -> np.ndarray:
        return self.weights[name]

    def copy(self) -> "VaeParams":
        return VaeParams(
            self.config,
            {k: w.copy() for k, w in self.weights.items()},
            {k: a.copy() for k, a in self.m.items()},
            {k: a.copy() for k, a in self.v.items()},
            self.t,
        )

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(self.weights[k])) for k in PARAM_BLOCKS)

    def equals(self, other: "VaeParams") -> bool:
        """Bit-for-bit equality of weights and optimizer state."""
        return (
            self.config == other.config
            and self.t == other.t
            and all(
                np.array_equal(getattr(self, part)[k], getattr(other, part)[k])
                for part in ("weights", "m", "v")
                for k in PARAM_BLOCKS
            )
        )


def glorot_limit(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def init_params(cfg: VaeConfig, rng: Optional[np.random.Generator] = None) -> VaeParams:
    """Glorot-uniform weights, zero biases and zero optimizer moments.

    Blocks are drawn in `PARAM_BLOCKS` order, so the result only depends on
    the generator state. With `rng=None` the generator is seeded from
    `cfg.seed`.
    """
    if rng is None:
        rng = cfg.seed
    rng = get_random_generator(rng)
    weights = {}
    for name, shape in cfg.block_shapes().items():
        if len(shape) == 2:
            limit = glorot_limit(*shape)
            weights[name] = rng.uniform(-limit, limit, shape)
        else:
            weights[name] = np.zeros(shape)
    weights = {name: weights[name] for name in PARAM_BLOCKS}
    return VaeParams(cfg, weights)
