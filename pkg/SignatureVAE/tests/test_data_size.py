import numpy as np
import pytest

from SignatureVAE.diagnostics import data_size_experiment
from SignatureVAE.diagnostics.data_size import nearest_training_distance
from SignatureVAE.learning.vae import VaeConfig
from SignatureVAE.model_systems import make_dataset


@pytest.mark.fast_test
def test_nearest_training_distance():
    X_train = np.array([[0.0, 0.0], [10.0, 0.0]])
    samples = np.array([[3.0, 4.0], [10.0, 1.0]])
    assert nearest_training_distance(samples, X_train) == 3.0
    images = samples.reshape(2, 1, 2)
    assert nearest_training_distance(images, X_train) == 3.0


@pytest.mark.fast_test
def test_experiment_bookkeeping():
    rng = np.random.default_rng(0)
    cfg = VaeConfig(input_dim=1, intermediate_dim=4, latent_dim=2, epochs=1,
                    batch_size=4)
    result = data_size_experiment(rng.random((12, 9)), rng.random((4, 9)),
                                  rng.random((3, 9)), cfg, n_samples=5, rng=0)
    assert (result.n_large, result.n_small) == (12, 4)
    assert set(result.to_dict()) == {
        "n_large", "n_small", "heldout_recon_large", "heldout_recon_small",
        "prior_distance_large", "prior_distance_small",
    }
    with pytest.raises(ValueError):
        data_size_experiment(rng.random((4, 9)), rng.random((4, 9)),
                             rng.random((4, 9)), cfg, n_samples=0)


@pytest.mark.slow_test
def test_small_training_set_generalises_worse():
    large = make_dataset(100, 20, 1, seed=0, size=16)
    small = large.subset(large.indices()[:210])
    heldout = make_dataset(10, 10, 1, seed=1, size=16)
    assert len(small.genuine()) == 200
    cfg = VaeConfig(input_dim=256, intermediate_dim=64, latent_dim=8, epochs=10,
                    batch_size=32, learning_rate=1e-3, seed=0)
    result = data_size_experiment(large, small, heldout, cfg, n_samples=100, rng=0)
    assert (result.n_large, result.n_small) == (2000, 200)
    assert result.heldout_recon_small > result.heldout_recon_large
    assert result.prior_distance_small > result.prior_distance_large
