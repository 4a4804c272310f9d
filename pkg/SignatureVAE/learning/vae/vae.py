"""Fully connected VAE: relu encoder with mean and log-variance heads,
reparameterised sampling, relu/sigmoid decoder and the beta-weighted loss
with hand-written gradients.

Examples are rows: a batch `X` has shape (n, input_dim).
"""
from dataclasses import dataclass, asdict
from typing import Dict, Optional, Tuple

import numpy as np

from ...utils import get_random_generator
from ...utils.linalg import ShapeError, relu, sigmoid
from .params import PARAM_BLOCKS, VaeParams

LOGVAR_CLIP = 10.0


@dataclass(frozen=True)
class LatentCode:
    """Posterior parameters of a batch together with the noise and sample."""

    mu: np.ndarray
    logvar: np.ndarray
    eps: np.ndarray
    z: np.ndarray

    @classmethod
    def from_noise(cls, mu, logvar, eps) -> "LatentCode":
        return cls(mu, logvar, eps, reparameterize(mu, logvar, eps))


@dataclass(frozen=True)
class LossBreakdown:
    """Reconstruction and KL parts of the loss, averaged over examples."""

    epoch: int
    recon: float
    kl: float
    beta_effective: float
    total: float

    @classmethod
    def from_terms(cls, recon, kl, beta_effective, epoch=0) -> "LossBreakdown":
        recon, kl, beta_effective = float(recon), float(kl), float(beta_effective)
        return cls(int(epoch), recon, kl, beta_effective, recon + beta_effective * kl)

    @property
    def weighted_kl(self) -> float:
        return self.beta_effective * self.kl

    def to_dict(self):
        return asdict(self)


def _as_batch(x, dim, name):
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = x.reshape(1, -1) if single else x
    if X.ndim != 2 or X.shape[1] != dim:
        raise ShapeError(
            "Expected `%s` with %d columns, got shape %s" % (name, dim, x.shape)
        )
    return X, single


def _encode_batch(params, X):
    a1 = X @ params["enc_W1"] + params["enc_b1"]
    h1 = relu(a1)
    mu = h1 @ params["W_mu"] + params["b_mu"]
    raw_logvar = h1 @ params["W_logvar"] + params["b_logvar"]
    logvar = np.clip(raw_logvar, -LOGVAR_CLIP, LOGVAR_CLIP)
    return a1, h1, mu, raw_logvar, logvar


def _decode_batch(params, Z):
    a2 = Z @ params["dec_W1"] + params["dec_b1"]
    h2 = relu(a2)
    x_hat = sigmoid(h2 @ params["dec_W2"] + params["dec_b2"])
    return a2, h2, x_hat


def encode(params: VaeParams, x) -> Tuple[np.ndarray, np.ndarray]:
    """Mean and clamped log-variance of q(z|x).

    `x` is a single flattened image or a batch of them; the outputs follow
    the same layout. Rows are processed independently.
    """
    X, single = _as_batch(x, params.config.input_dim, "x")
    _, _, mu, _, logvar = _encode_batch(params, X)
    if single:
        return mu[0], logvar[0]
    return mu, logvar


def reparameterize(mu, logvar, eps) -> np.ndarray:
    """z = mu + exp(logvar / 2) * eps."""
    mu = np.asarray(mu, dtype=np.float64)
    logvar = np.asarray(logvar, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    if not (mu.shape == logvar.shape == eps.shape):
        raise ShapeError(
            "mu, logvar and eps must have equal shapes, got %s, %s, %s"
            % (mu.shape, logvar.shape, eps.shape)
        )
    return mu + np.exp(logvar / 2) * eps


def decode(params: VaeParams, z) -> np.ndarray:
    Z, single = _as_batch(z, params.config.latent_dim, "z")
    _, _, x_hat = _decode_batch(params, Z)
    return x_hat[0] if single else x_hat


def kl_per_dim(mu, logvar) -> np.ndarray:
    """Closed-form KL(N(mu, exp(logvar)) || N(0, 1)) of every coordinate."""
    mu = np.asarray(mu, dtype=np.float64)
    logvar = np.asarray(logvar, dtype=np.float64)
    if mu.shape != logvar.shape:
        raise ShapeError("mu %s and logvar %s differ" % (mu.shape, logvar.shape))
    # expm1 keeps tiny logvar values exact; the result is >= 0 up to rounding
    return np.maximum(-0.5 * (logvar - np.expm1(logvar) - mu ** 2), 0.0)


def kl_divergence(mu, logvar):
    """Sum of `kl_per_dim` over the last axis.

    A scalar for a single code, one value per row for a batch.
    """
    kl = kl_per_dim(mu, logvar).sum(axis=-1)
    return float(kl) if np.ndim(kl) == 0 else kl


def recon_per_example(x, x_hat) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    x_hat = np.atleast_2d(np.asarray(x_hat, dtype=np.float64))
    if x.shape != x_hat.shape:
        raise ShapeError("x %s and x_hat %s differ" % (x.shape, x_hat.shape))
    return np.sum((x - x_hat) ** 2, axis=1)


def loss(x, code: LatentCode, x_hat, beta_effective: float, epoch: int = 0
         ) -> LossBreakdown:
    """Summed squared pixel error plus `beta_effective` times the KL term,
    each averaged over the examples of the batch."""
    if beta_effective < 0:
        raise ValueError("Expected `beta_effective` >= 0, got %r" % beta_effective)
    recon = recon_per_example(x, x_hat)
    kl = np.atleast_1d(kl_divergence(code.mu, code.logvar))
    return LossBreakdown.from_terms(
        np.mean(recon), np.mean(kl), beta_effective, epoch
    )


def value_and_grad(params: VaeParams, batch, eps_batch, beta_effective: float
                   ) -> Tuple[LossBreakdown, Dict[str, np.ndarray]]:
    """Loss of a batch and the exact gradient of its total w.r.t. every block.

    `eps` is treated as a constant input, so gradients reach the encoder
    heads through `mu` and `logvar` only. The log-variance clamp has zero
    gradient where it is active.
    """
    X, _ = _as_batch(batch, params.config.input_dim, "batch")
    E, _ = _as_batch(eps_batch, params.config.latent_dim, "eps_batch")
    if E.shape[0] != X.shape[0]:
        raise ShapeError(
            "Got %d examples but %d noise rows" % (X.shape[0], E.shape[0])
        )
    n = X.shape[0]
    beta = float(beta_effective)

    a1, h1, mu, raw_logvar, logvar = _encode_batch(params, X)
    std = np.exp(logvar / 2)
    Z = mu + std * E
    a2, h2, x_hat = _decode_batch(params, Z)

    breakdown = LossBreakdown.from_terms(
        np.mean(recon_per_example(X, x_hat)),
        np.mean(kl_divergence(mu, logvar)),
        beta,
    )

    # decoder
    d_out = 2.0 * (x_hat - X) / n * x_hat * (1.0 - x_hat)
    grads = {
        "dec_W2": h2.T @ d_out,
        "dec_b2": d_out.sum(axis=0),
    }
    d_a2 = (d_out @ params["dec_W2"].T) * (a2 > 0)
    grads["dec_W1"] = Z.T @ d_a2
    grads["dec_b1"] = d_a2.sum(axis=0)
    d_z = d_a2 @ params["dec_W1"].T

    # encoder heads
    d_mu = d_z + beta * mu / n
    d_logvar = d_z * E * 0.5 * std + beta * 0.5 * np.expm1(logvar) / n
    d_logvar = d_logvar * (np.abs(raw_logvar) < LOGVAR_CLIP)
    grads["W_mu"] = h1.T @ d_mu
    grads["b_mu"] = d_mu.sum(axis=0)
    grads["W_logvar"] = h1.T @ d_logvar
    grads["b_logvar"] = d_logvar.sum(axis=0)
    d_a1 = (d_mu @ params["W_mu"].T + d_logvar @ params["W_logvar"].T) * (a1 > 0)
    grads["enc_W1"] = X.T @ d_a1
    grads["enc_b1"] = d_a1.sum(axis=0)

    return breakdown, {name: grads[name] for name in PARAM_BLOCKS}


def backward(params: VaeParams, batch, eps_batch, beta_effective: float
             ) -> Dict[str, np.ndarray]:
    """Gradients of the mean-over-batch total loss, keyed by block name."""
    return value_and_grad(params, batch, eps_batch, beta_effective)[1]


def batch_loss(params: VaeParams, batch, eps_batch, beta_effective: float) -> float:
    """Mean-over-batch total loss for fixed noise."""
    X, _ = _as_batch(batch, params.config.input_dim, "batch")
    E, _ = _as_batch(eps_batch, params.config.latent_dim, "eps_batch")
    _, _, mu, _, logvar = _encode_batch(params, X)
    _, _, x_hat = _decode_batch(params, reparameterize(mu, logvar, E))
    code = LatentCode(mu, logvar, E, None)
    return loss(X, code, x_hat, beta_effective).total


def reconstruct(params: VaeParams, x) -> np.ndarray:
    """Decode the posterior mean of `x`; no sampling."""
    mu, _ = encode(params, x)
    return decode(params, mu)


def reconstruction_errors(params: VaeParams, X) -> np.ndarray:
    """Summed squared error of every row of `X` against its mean
    reconstruction."""
    X, _ = _as_batch(X, params.config.input_dim, "X")
    return recon_per_example(X, reconstruct(params, X))


def reconstruction_error(params: VaeParams, x) -> float:
    X, single = _as_batch(x, params.config.input_dim, "x")
    if not single:
        raise ShapeError("Expected a single flattened image, got %s" % (X.shape,))
    return float(reconstruction_errors(params, X)[0])


def image_side(params: VaeParams) -> int:
    side = int(round(np.sqrt(params.config.input_dim)))
    if side * side != params.config.input_dim:
        raise ShapeError(
            "input_dim %d is not a square image" % params.config.input_dim
        )
    return side


def generate(params: VaeParams, z) -> np.ndarray:
    """Decode latent code(s) into square gray images."""
    side = image_side(params)
    x_hat = decode(params, z)
    if x_hat.ndim == 1:
        return x_hat.reshape(side, side)
    return x_hat.reshape(-1, side, side)


def sample_prior(params: VaeParams, n: int, rng: Optional[np.random.Generator] = None
                 ) -> np.ndarray:
    """Decode `n` draws z ~ N(0, I) into images of shape (n, side, side)."""
    if n < 1:
        raise ValueError("Expected `n` >= 1, got %d" % n)
    rng = get_random_generator(rng)
    z = rng.standard_normal((n, params.config.latent_dim))
    return generate(params, z)
