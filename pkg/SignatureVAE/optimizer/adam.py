import numpy as np

from ..learning.vae import PARAM_BLOCKS, VaeParams

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


class NonFiniteGradientError(FloatingPointError):
    """Raised when a gradient block holds NaN or Inf values.

    Parameters
    ----------
    * `block` [str]:
        Name of the offending parameter block.
    """

    def __init__(self, block):
        self.block = block
        super().__init__("Non-finite gradient in parameter block %r" % block)


def step(params: VaeParams, gradients, learning_rate=None) -> VaeParams:
    """
    One Adam update with bias correction.

    The input is left untouched; the returned `VaeParams` carries the new
    weights, moments and step count. All blocks are checked before any is
    updated, so a failing step leaves nothing half-applied.

    Parameters
    ----------
    * `params` [VaeParams]:
        Current weights and moment estimates.

    * `gradients` [dict]:
        Gradient of the loss for every block in `PARAM_BLOCKS`.

    * `learning_rate` [float, optional]:
        Step size, defaults to `params.config.learning_rate`.

    Returns
    -------
    * `params` [VaeParams]:
        Updated parameters.
    """
    if learning_rate is None:
        learning_rate = params.config.learning_rate
    for name in PARAM_BLOCKS:
        g = gradients[name]
        if g.shape != params.weights[name].shape:
            raise ValueError(
                "Gradient of %r has shape %s, expected %s"
                % (name, g.shape, params.weights[name].shape)
            )
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradientError(name)

    t = params.t + 1
    weights, m, v = {}, {}, {}
    for name in PARAM_BLOCKS:
        g = gradients[name]
        m[name] = BETA1 * params.m[name] + (1 - BETA1) * g
        v[name] = BETA2 * params.v[name] + (1 - BETA2) * g * g
        m_hat = m[name] / (1 - BETA1 ** t)
        v_hat = v[name] / (1 - BETA2 ** t)
        weights[name] = params.weights[name] - learning_rate * m_hat / (
            np.sqrt(v_hat) + EPSILON
        )
    return VaeParams(params.config, weights, m, v, t)
