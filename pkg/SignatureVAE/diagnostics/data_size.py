"""Effect of training set size: the same network trained on a large and a
small set, compared on held-out reconstruction and on how close its prior
samples stay to the training images."""
import logging
from dataclasses import dataclass, asdict

import numpy as np
from scipy.spatial.distance import cdist

from ..learning.vae import VaeConfig, reconstruction_errors, sample_prior
from ..optimizer.train import train, training_matrix
from ..utils import get_random_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DataSizeResult:
    n_large: int
    n_small: int
    heldout_recon_large: float
    heldout_recon_small: float
    prior_distance_large: float
    prior_distance_small: float

    def to_dict(self):
        return asdict(self)


def nearest_training_distance(samples, X_train) -> float:
    """Mean Euclidean distance of every sample to its closest training row."""
    samples = np.asarray(samples, dtype=np.float64).reshape(len(samples), -1)
    return float(cdist(samples, X_train).min(axis=1).mean())


def data_size_experiment(large, small, heldout, cfg: VaeConfig, n_samples=100,
                         rng=None) -> DataSizeResult:
    """
    Train two identical networks on `large` and `small` for `cfg.epochs`
    epochs each and compare them.

    Parameters
    ----------
    * `large`, `small` [Manifest or array]:
        Training images; genuine rows of a manifest.

    * `heldout` [Manifest or array]:
        Images neither network was trained on.

    * `cfg` [VaeConfig]:
        Settings shared by both networks, seed included.

    * `n_samples` [int, default=100]:
        Prior samples drawn from each network.

    * `rng` [int, Generator or None]:
        Source of the prior samples.

    Returns
    -------
    * `result` [DataSizeResult]:
        Mean held-out reconstruction error and mean nearest-training
        distance of prior samples for both networks.
    """
    if n_samples < 1:
        raise ValueError("Expected `n_samples` >= 1, got %d" % n_samples)
    X_large = training_matrix(large)
    X_small = training_matrix(small)
    X_held = training_matrix(heldout)
    rng = get_random_generator(rng)
    stats = {}
    for name, X in (("large", X_large), ("small", X_small)):
        logger.info("Training the %s model on %d images", name, len(X))
        params, _ = train(X, cfg.replace(input_dim=X.shape[1]))
        stats[name] = (
            float(reconstruction_errors(params, X_held).mean()),
            nearest_training_distance(sample_prior(params, n_samples, rng), X),
        )
    return DataSizeResult(
        n_large=len(X_large),
        n_small=len(X_small),
        heldout_recon_large=stats["large"][0],
        heldout_recon_small=stats["small"][0],
        prior_distance_large=stats["large"][1],
        prior_distance_small=stats["small"][1],
    )
