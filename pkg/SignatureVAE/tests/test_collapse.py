import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from SignatureVAE.diagnostics import (
    average_loss_history,
    collapse_report,
    kl_fraction,
    write_collapse_report,
)
from SignatureVAE.learning.vae import LossBreakdown, VaeConfig, init_params
from SignatureVAE.model_systems import make_dataset


@pytest.fixture
def params():
    params = init_params(VaeConfig(input_dim=16, intermediate_dim=6, latent_dim=4))
    for name in ("W_mu", "b_mu", "W_logvar", "b_logvar"):
        params.weights[name][...] = 0.0
    params.weights["b_mu"][2] = 1.0
    params.weights["b_logvar"][3] = 1.0
    return params


@pytest.mark.fast_test
def test_per_dim_kl(params):
    X = np.random.default_rng(0).random((5, 16))
    report = collapse_report(params, X)
    assert_allclose(report.per_dim_kl, [0.0, 0.0, 0.5, 0.5 * (np.e - 2)])
    assert report.collapsed_dims == [0, 1]
    assert report.n_collapsed == 2
    assert report.collapsed_fraction == 0.5
    assert report.kl_fraction_by_epoch == []

    report = collapse_report(params, X, threshold=0.4)
    assert report.collapsed_dims == [0, 1, 3]
    with pytest.raises(ValueError):
        collapse_report(params, X, threshold=0.0)


@pytest.mark.fast_test
def test_manifest_uses_genuine_rows(params):
    manifest = make_dataset(1, 3, 2, size=4)
    report = collapse_report(params, manifest)
    assert report.per_dim_kl.shape == (4,)
    both = collapse_report(params, manifest, one_class=False)
    assert_allclose(both.per_dim_kl, report.per_dim_kl)


@pytest.mark.fast_test
def test_kl_fraction():
    history = [
        LossBreakdown.from_terms(3.0, 1.0, 1.0, 0),
        LossBreakdown.from_terms(1.0, 1.0, 0.5, 1),
        LossBreakdown.from_terms(0.0, 0.0, 1.0, 2),
    ]
    assert kl_fraction(history) == [0.25, 0.5, 0.0]


@pytest.mark.fast_test
def test_write_collapse_report(params, tmp_path):
    X = np.zeros((2, 16))
    history = [LossBreakdown.from_terms(1.0, 1.0, 1.0, 0)]
    path = write_collapse_report(str(tmp_path / "collapse.json"),
                                 collapse_report(params, X, history))
    with open(path) as f:
        data = json.load(f)
    assert data["collapsed_dims"] == [0, 1]
    assert data["threshold"] == 0.01
    assert data["kl_fraction_by_epoch"] == [0.5]
    assert len(data["per_dim_kl"]) == 4


@pytest.mark.fast_test
def test_average_loss_history():
    a = [LossBreakdown.from_terms(2.0, 1.0, 1.0, e) for e in range(3)]
    b = [LossBreakdown.from_terms(4.0, 3.0, 1.0, e) for e in range(2)]
    averaged = average_loss_history([a, b])
    assert [x.epoch for x in averaged] == [0, 1, 2]
    assert averaged[0].recon == 3.0 and averaged[0].kl == 2.0
    assert averaged[0].total == 5.0
    assert averaged[2] == a[2]
    with pytest.raises(ValueError):
        average_loss_history([[], []])
