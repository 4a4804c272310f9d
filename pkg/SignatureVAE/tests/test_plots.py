import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pytest  # noqa: E402

from SignatureVAE.diagnostics import all_traversals  # noqa: E402
from SignatureVAE.learning import evaluate  # noqa: E402
from SignatureVAE.learning.vae import LossBreakdown, VaeConfig, init_params  # noqa: E402
from SignatureVAE.learning.vae.checkpoint import read_history_csv  # noqa: E402
from SignatureVAE.plots import (  # noqa: E402
    loss_breakdown_plot,
    plot_embedding,
    plot_loss_breakdown,
    plot_loss_convergence,
    plot_roc,
    plot_traversals,
    save_figure,
)
from SignatureVAE.utils import create_result  # noqa: E402


@pytest.fixture
def history():
    return [LossBreakdown.from_terms(10.0 - e, 1.0 + e, 0.5, e) for e in range(4)]


@pytest.fixture(autouse=True)
def close_figures():
    yield
    plt.close("all")


@pytest.mark.fast_test
def test_loss_breakdown_bars(history):
    fig, ax = plt.subplots()
    plot_loss_breakdown(history, ax=ax)
    patches = ax.patches
    assert len(patches) == 8
    recon, kl = patches[:4], patches[4:]
    assert [p.get_height() for p in recon] == [10.0, 9.0, 8.0, 7.0]
    # KL bars show the weighted term, stacked on the reconstruction
    assert [p.get_height() for p in kl] == [0.5, 1.0, 1.5, 2.0]
    assert [p.get_y() for p in kl] == [10.0, 9.0, 8.0, 7.0]
    assert ax.get_xlabel() == "Epoch"
    with pytest.raises(ValueError):
        plot_loss_breakdown([], ax=ax)


@pytest.mark.fast_test
def test_loss_breakdown_files_are_reproducible(history, tmp_path):
    first = loss_breakdown_plot(history, str(tmp_path / "a" / "loss.svg"))
    second = loss_breakdown_plot(history, str(tmp_path / "b" / "loss.svg"))
    assert first == [str(tmp_path / "a" / "loss.svg"), str(tmp_path / "a" / "loss.csv")]
    with open(first[0], "rb") as f, open(second[0], "rb") as g:
        assert f.read() == g.read()
    assert read_history_csv(first[1]) == history


@pytest.mark.fast_test
def test_traversal_figure_is_reproducible(tmp_path):
    params = init_params(VaeConfig(input_dim=16, intermediate_dim=4, latent_dim=2))
    grids = all_traversals(params, steps=5)
    paths = []
    for name in ("x.svg", "y.svg"):
        fig = plot_traversals(grids, title="beta 1")
        assert isinstance(fig, mpl.figure.Figure)
        assert len(fig.axes) == 2
        paths.append(save_figure(fig, str(tmp_path / name)))
    with open(paths[0], "rb") as f, open(paths[1], "rb") as g:
        assert f.read() == g.read()
    with pytest.raises(ValueError):
        plot_traversals([])


@pytest.mark.fast_test
def test_plot_roc():
    good = evaluate([0, 0, 1, 1], [0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9])
    undefined = evaluate([0, 0], [0, 0], [0.1, 0.2])
    ax = plot_roc({"knn": good, "rf": undefined})
    # one curve plus the chance diagonal
    assert len(ax.lines) == 2
    assert ax.get_legend().get_texts()[0].get_text() == "knn (AUC 1.000)"


@pytest.mark.fast_test
def test_plot_embedding():
    Y = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    ax = plot_embedding(Y, [0, 1, 1])
    texts = [t.get_text() for t in ax.get_legend().get_texts()]
    assert texts == ["genuine", "forged"]
    ax = plt.figure().gca()
    plot_embedding(Y, ["id0", "id1", "id2"], ax=ax)
    assert len(ax.collections) == 3


@pytest.mark.fast_test
def test_plot_loss_convergence(history):
    params = init_params(VaeConfig(input_dim=4, intermediate_dim=2, latent_dim=1))
    result = create_result(params, history)
    ax = plot_loss_convergence(result, ("runs", [result, result]), yscale="log")
    assert ax.get_yscale() == "log"
    np.testing.assert_allclose(ax.lines[0].get_ydata(),
                               [e.total for e in history])
    assert len(ax.lines) == 4
