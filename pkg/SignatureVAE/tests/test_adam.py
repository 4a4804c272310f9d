import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from SignatureVAE.learning.vae import PARAM_BLOCKS, VaeConfig, init_params
from SignatureVAE.optimizer import NonFiniteGradientError, step
from SignatureVAE.optimizer.adam import BETA1, BETA2


def first_step(w, g, lr=0.01):
    return w - lr * g / (np.abs(g) + 1e-8)


def random_gradients(params, seed=0):
    rng = np.random.default_rng(seed)
    return {name: rng.normal(size=params[name].shape) for name in PARAM_BLOCKS}


@pytest.fixture
def params():
    cfg = VaeConfig(input_dim=9, intermediate_dim=4, latent_dim=2,
                    learning_rate=0.01, seed=1)
    return init_params(cfg)


@pytest.mark.fast_test
def test_first_step_moves_by_learning_rate(params):
    grads = random_gradients(params)
    new = step(params, grads)
    assert new.t == 1
    for name in PARAM_BLOCKS:
        # bias-corrected first step is lr * g / (|g| + eps)
        assert_allclose(new[name], first_step(params[name], grads[name]), atol=1e-12)
        assert np.abs(new[name] - params[name]).max() <= 0.01
        assert_allclose(new.m[name], (1 - BETA1) * grads[name])
        assert_allclose(new.v[name], (1 - BETA2) * grads[name] ** 2)


@pytest.mark.fast_test
def test_step_leaves_input_untouched(params):
    before = params.copy()
    step(params, random_gradients(params), learning_rate=0.5)
    assert params.equals(before)


@pytest.mark.fast_test
def test_two_steps_follow_bias_correction(params):
    g1, g2 = random_gradients(params, 1), random_gradients(params, 2)
    out = step(step(params, g1), g2)
    name = "dec_W2"
    m = BETA1 * (1 - BETA1) * g1[name] + (1 - BETA1) * g2[name]
    v = BETA2 * (1 - BETA2) * g1[name] ** 2 + (1 - BETA2) * g2[name] ** 2
    after_one = first_step(params[name], g1[name])
    expected = after_one - 0.01 * (m / (1 - BETA1 ** 2)) / (
        np.sqrt(v / (1 - BETA2 ** 2)) + 1e-8)
    assert out.t == 2
    assert_allclose(out[name], expected, atol=1e-8)


@pytest.mark.fast_test
def test_non_finite_gradient_is_rejected(params):
    grads = random_gradients(params)
    grads["W_mu"][0, 0] = np.nan
    with pytest.raises(NonFiniteGradientError) as excinfo:
        step(params, grads)
    assert excinfo.value.block == "W_mu"
    assert params.t == 0


@pytest.mark.fast_test
def test_gradient_shape_is_checked(params):
    grads = random_gradients(params)
    grads["b_mu"] = np.zeros(5)
    with pytest.raises(ValueError):
        step(params, grads)


@pytest.mark.fast_test
def test_minimises_quadratic(params):
    current = params
    for _ in range(300):
        grads = {name: 2 * current[name] for name in PARAM_BLOCKS}
        current = step(current, grads, learning_rate=0.05)
    for name in PARAM_BLOCKS:
        assert np.abs(current[name]).max() < 0.1
    assert_array_equal(current["enc_b1"], 0.0)
