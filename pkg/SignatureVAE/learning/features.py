"""Detector features taken from a trained VAE: the encoder mean and the
reconstruction error of every image."""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from sklearn.preprocessing import StandardScaler

from ..image.manifest import Manifest
from ..utils.linalg import ShapeError
from .vae import VaeParams, encode, reconstruction_errors

FEATURE_MODES = ("latent", "recon", "both")


def check_mode(mode):
    if mode not in FEATURE_MODES:
        raise ValueError("Expected `mode` in %s, got %r" % (FEATURE_MODES, mode))
    return mode


@dataclass
class FeatureSet:
    """
    Labelled features of a set of images.

    `latent` holds one encoder mean per row and `recon` the matching
    reconstruction error. `matrix` lays them out for a feature mode.
    """

    latent: np.ndarray
    recon: np.ndarray
    labels: np.ndarray
    mode: str = "both"
    paths: Optional[List[str]] = None

    def __post_init__(self):
        check_mode(self.mode)
        if not (len(self.latent) == len(self.recon) == len(self.labels)):
            raise ValueError("latent, recon and labels differ in length")

    def __len__(self):
        return len(self.labels)

    def subset(self, indices: Sequence[int]) -> "FeatureSet":
        indices = np.asarray(indices, dtype=int)
        paths = None if self.paths is None else [self.paths[i] for i in indices]
        return FeatureSet(self.latent[indices], self.recon[indices],
                          self.labels[indices], self.mode, paths)

    def with_mode(self, mode) -> "FeatureSet":
        return FeatureSet(self.latent, self.recon, self.labels, mode, self.paths)

    def fit_recon_scaler(self) -> StandardScaler:
        """Zero-mean, unit-variance scaling of the reconstruction column
        fitted on these rows."""
        return StandardScaler().fit(self.recon.reshape(-1, 1))

    def matrix(self, recon_scaler: Optional[StandardScaler] = None) -> np.ndarray:
        """Feature matrix: LD columns (latent), 1 column (recon) or LD + 1
        columns (both). In "both" mode the reconstruction column is passed
        through `recon_scaler` when given."""
        recon = self.recon.reshape(-1, 1)
        if self.mode == "latent":
            return self.latent.copy()
        if self.mode == "recon":
            return recon.copy()
        if recon_scaler is not None:
            recon = recon_scaler.transform(recon)
        return np.hstack([self.latent, recon])

    @property
    def X(self) -> np.ndarray:
        return self.matrix()


def features_from_matrix(params: VaeParams, X, labels, mode="both", paths=None
                         ) -> FeatureSet:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.config.input_dim:
        raise ShapeError(
            "Images have shape %s but the model expects %d pixels"
            % (X.shape, params.config.input_dim)
        )
    mu, _ = encode(params, X)
    return FeatureSet(
        latent=mu,
        recon=reconstruction_errors(params, X),
        labels=np.asarray(labels, dtype=int),
        mode=check_mode(mode),
        paths=paths,
    )


def extract_features(params: VaeParams, manifest: Manifest, mode="both",
                     indices: Optional[Sequence[int]] = None) -> FeatureSet:
    """
    Encode every selected manifest image without sampling.

    Parameters
    ----------
    * `params` [VaeParams]:
        Trained network.

    * `manifest` [Manifest]:
        Images to featurise.

    * `mode` ["latent", "recon" or "both", default="both"]:
        Feature layout of `FeatureSet.matrix`.

    * `indices` [list of int, optional]:
        Rows to use; all rows by default.

    Returns
    -------
    * `features` [FeatureSet]
    """
    if indices is None:
        indices = range(len(manifest))
    indices = list(indices)
    X = manifest.matrix(indices)
    labels = manifest.labels[indices]
    paths = [manifest.rows[i].path for i in indices]
    return features_from_matrix(params, X, labels, mode=mode, paths=paths)
