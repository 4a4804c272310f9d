import json
import os

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from SignatureVAE.diagnostics import (
    DEFAULT_BETAS,
    all_traversals,
    beta_sweep,
    latent_traversal,
    write_beta_sweep,
    write_traversals,
)
from SignatureVAE.image import load_image
from SignatureVAE.learning.vae import VaeConfig, init_params, load_checkpoint
from SignatureVAE.learning.vae.vae import generate


@pytest.fixture
def params():
    return init_params(VaeConfig(input_dim=36, intermediate_dim=8, latent_dim=3,
                                 seed=1))


@pytest.mark.fast_test
def test_latent_traversal(params):
    grid = latent_traversal(params, 1)
    assert grid.dim == 1
    assert_array_equal(grid.values, np.linspace(-4, 4, 9))
    assert grid.images.shape == (9, 6, 6)
    # the middle step decodes the origin
    assert_allclose(grid.images[4], generate(params, np.zeros(3)), rtol=1e-12)
    assert grid.montage().shape == (6, 9 * 6 + 8)
    assert grid.montage(gap=0).shape == (6, 54)

    grid = latent_traversal(params, 0, lo=-1, hi=1, steps=3)
    assert_array_equal(grid.values, [-1.0, 0.0, 1.0])
    assert len(all_traversals(params)) == 3


@pytest.mark.fast_test
@pytest.mark.parametrize("kwargs", [
    {"dim": 3},
    {"dim": -1},
    {"dim": 0, "lo": 1.0, "hi": 1.0},
    {"dim": 0, "steps": 1},
])
def test_traversal_validation(params, kwargs):
    with pytest.raises(ValueError):
        latent_traversal(params, **kwargs)


@pytest.mark.fast_test
def test_write_traversals(params, tmp_path):
    written = write_traversals(all_traversals(params, steps=5), str(tmp_path))
    names = [os.path.basename(p) for p in written]
    assert names == ["traversal_dim00.pgm", "traversal_dim01.pgm",
                     "traversal_dim02.pgm", "traversal_index.json"]
    assert load_image(written[0]).shape == (6, 5 * 6 + 4)
    with open(written[-1]) as f:
        index = json.load(f)
    assert index[2] == {"dim": 2, "file": "traversal_dim02.pgm",
                        "values": [-4.0, -2.0, 0.0, 2.0, 4.0]}


@pytest.mark.fast_test
def test_beta_sweep(tmp_path):
    X = np.random.default_rng(0).random((6, 16))
    cfg = VaeConfig(input_dim=16, intermediate_dim=6, latent_dim=2, epochs=2,
                    batch_size=3, seed=0)
    results = beta_sweep(X, cfg, betas=(1.0, 5.0), steps=3)
    assert [r.beta for r in results] == [1.0, 5.0]
    for res in results:
        assert res.params.config.beta == res.beta
        assert res.params.config.seed == 0
        assert len(res.history) == 2
        assert len(res.grids) == 2
        assert res.collapse.per_dim_kl.shape == (2,)
        assert len(res.collapse.kl_fraction_by_epoch) == 2

    written = write_beta_sweep(results, str(tmp_path))
    sub = tmp_path / "beta_5.0"
    for name in ("model.svae", "model.svae.json", "history.csv",
                 "collapse.json", "traversal_dim01.pgm", "traversal_index.json"):
        assert str(sub / name) in written
        assert (sub / name).exists()
    assert load_checkpoint(str(sub / "model.svae")).equals(results[1].params)

    with pytest.raises(ValueError):
        beta_sweep(X, cfg, betas=())


@pytest.mark.slow_test
def test_default_beta_sweep_grids():
    X = np.random.default_rng(1).random((12, 64))
    cfg = VaeConfig(input_dim=64, intermediate_dim=16, latent_dim=5, epochs=3,
                    batch_size=4, seed=0)
    results = beta_sweep(X, cfg)
    assert [r.beta for r in results] == list(DEFAULT_BETAS)
    assert len(results) == 6
    for res in results:
        assert [grid.dim for grid in res.grids] == [0, 1, 2, 3, 4]
        for grid in res.grids:
            assert grid.images.shape == (9, 8, 8)
            assert np.all((grid.images >= 0.0) & (grid.images <= 1.0))
