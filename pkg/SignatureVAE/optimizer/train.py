"""Mini-batch training of the VAE."""
import logging
import warnings
from typing import List, Tuple, Union

import numpy as np

from ..callbacks import check_callback, VerboseCallback
from ..image.manifest import GENUINE, EmptyManifestError, Manifest
from ..learning.vae import (
    LossBreakdown,
    VaeConfig,
    VaeParams,
    init_params,
    value_and_grad,
)
from ..utils import create_result, eval_callbacks, get_random_generator
from ..utils.linalg import ShapeError
from .adam import NonFiniteGradientError, step

logger = logging.getLogger(__name__)


class AbortedEpochWarning(RuntimeWarning):
    """An epoch was cut short by a non-finite gradient."""


def kl_anneal_weight(epoch: int, cfg: VaeConfig) -> float:
    """KL weight used during `epoch` (counted from 0)."""
    if epoch < 0:
        raise ValueError("Expected `epoch` >= 0, got %d" % epoch)
    if cfg.anneal == "none":
        return float(cfg.beta)
    return float(cfg.beta) * min(1.0, epoch / cfg.anneal_epochs)


def training_matrix(data: Union[Manifest, np.ndarray], one_class=True) -> np.ndarray:
    """Flattened training images.

    For a manifest in one-class mode only genuine rows are loaded, so no
    forged image is ever read.
    """
    if isinstance(data, Manifest):
        if len(data) == 0:
            raise EmptyManifestError("Cannot train on an empty manifest")
        label = GENUINE if one_class else None
        indices = data.indices(label=label)
        if not indices:
            raise EmptyManifestError(
                "The manifest has no genuine signatures to train on"
            )
        return data.matrix(indices)
    X = np.asarray(data, dtype=np.float64)
    if X.ndim == 3:
        X = X.reshape(X.shape[0], -1)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyManifestError(
            "Expected a non-empty (n_examples, n_pixels) array, got shape %s"
            % (X.shape,)
        )
    return X


def train(
    data: Union[Manifest, np.ndarray],
    cfg: VaeConfig,
    one_class: bool = True,
    callback=None,
    verbose: bool = False,
) -> Tuple[VaeParams, List[LossBreakdown]]:
    """
    Train a VAE with Adam on shuffled mini-batches.

    A single generator seeded with `cfg.seed` draws, in this order, the
    initial weights and then per epoch the shuffle and the noise of every
    batch. Two runs with equal inputs are therefore bit-identical.

    Parameters
    ----------
    * `data` [Manifest or array]:
        Training images. A manifest is restricted to its genuine rows when
        `one_class` is True; an array of shape (n, n_pixels) or
        (n, side, side) is used as given.

    * `cfg` [VaeConfig]:
        Network and optimizer settings. `cfg.input_dim` must match the
        number of pixels.

    * `one_class` [bool, default=True]:
        Train on genuine signatures only.

    * `callback` [callable, list of callables, optional]:
        Called after every epoch with the result so far (see
        `utils.create_result`). Returning True stops training.

    * `verbose` [bool, default=False]:
        Log the loss breakdown of every epoch.

    Returns
    -------
    * `params` [VaeParams]:
        Trained network.

    * `history` [list of LossBreakdown]:
        One entry per finished epoch, averaged over its examples.
    """
    X = training_matrix(data, one_class=one_class)
    n, n_pixels = X.shape
    if n_pixels != cfg.input_dim:
        raise ShapeError(
            "Images have %d pixels but `input_dim` is %d" % (n_pixels, cfg.input_dim)
        )
    callbacks = check_callback(callback)
    if verbose:
        callbacks.append(VerboseCallback(n_total=cfg.epochs))

    rng = get_random_generator(cfg.seed)
    params = init_params(cfg, rng)
    history = []
    logger.info(
        "Training on %d images, %d epochs, batch size %d, beta %g",
        n, cfg.epochs, cfg.batch_size, cfg.beta,
    )
    for epoch in range(cfg.epochs):
        beta = kl_anneal_weight(epoch, cfg)
        order = rng.permutation(n)
        recon_sum = kl_sum = 0.0
        seen = 0
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            eps = rng.standard_normal((len(idx), cfg.latent_dim))
            breakdown, grads = value_and_grad(params, X[idx], eps, beta)
            recon_sum += breakdown.recon * len(idx)
            kl_sum += breakdown.kl * len(idx)
            seen += len(idx)
            try:
                params = step(params, grads)
            except NonFiniteGradientError as err:
                warnings.warn(
                    "Epoch %d aborted after %d of %d examples: %s"
                    % (epoch, seen, n, err),
                    AbortedEpochWarning,
                )
                break
        history.append(LossBreakdown.from_terms(recon_sum / seen, kl_sum / seen,
                                                beta, epoch))
        if callbacks:
            result = create_result(params, history, cfg, rng)
            if eval_callbacks(callbacks, result):
                logger.info("Training stopped by callback after epoch %d", epoch)
                break
    return params, history

