"""Plotting functions."""
import os

import numpy as np
import matplotlib as mpl
import matplotlib.pyplot as plt
from matplotlib.pyplot import cm
from matplotlib.ticker import MaxNLocator
from scipy.optimize import OptimizeResult

from .image.manifest import FORGED_LABEL
from .learning.vae.checkpoint import write_history_csv

SVG_HASH_SALT = "SignatureVAE"


def save_figure(fig, path):
    """Save `fig`, making SVG output byte-reproducible (fixed element ids,
    no date stamp)."""
    directory = os.path.dirname(str(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    with mpl.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        if str(path).lower().endswith(".svg"):
            fig.savefig(path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(path)
    return str(path)


def plot_loss_breakdown(history, ax=None, title="Loss breakdown"):
    """Stacked bars of the reconstruction term (bottom) and the weighted KL
    term (top) of every epoch.

    Parameters
    ----------
    * `history` [list of LossBreakdown]:
        Training history; must not be empty.

    * `ax` [`Axes`, optional]:
        The matplotlib axes on which to draw the plot, or `None` to create
        a new one.

    Returns
    -------
    * `ax`: [`Axes`]:
        The matplotlib axes. Patches are ordered reconstruction bars first,
        then KL bars.
    """
    if len(history) == 0:
        raise ValueError("Cannot plot an empty loss history")
    if ax is None:
        ax = plt.gca()
    epochs = np.array([entry.epoch for entry in history])
    recon = np.array([entry.recon for entry in history])
    weighted_kl = np.array([entry.weighted_kl for entry in history])
    ax.bar(epochs, recon, width=1.0, align="edge", color="tab:blue",
           label="reconstruction (MSE)")
    ax.bar(epochs, weighted_kl, width=1.0, align="edge", bottom=recon,
           color="tab:orange", label=r"$\beta \cdot$ KL")
    ax.set_title(title)
    ax.set_xlabel("Epoch")
    ax.set_ylabel("Loss per example")
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.legend(loc="best")
    return ax


def loss_breakdown_plot(history, svg_path, csv_path=None):
    """Write the loss breakdown as SVG and the history as CSV.

    The CSV uses the training history format. Returns the written paths.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        plot_loss_breakdown(history, ax=ax)
        written = [save_figure(fig, svg_path)]
    finally:
        plt.close(fig)
    if csv_path is None:
        csv_path = os.path.splitext(str(svg_path))[0] + ".csv"
    written.append(write_history_csv(csv_path, history))
    return written


def plot_loss_convergence(*args, **kwargs):
    """Plot one or several total loss traces.

    Parameters
    ----------
    * `args[i]` [`OptimizeResult`, list of `OptimizeResult`, or tuple]:
        The training result(s) for which to plot the loss trace.

        - if `OptimizeResult`, then draw the corresponding single trace;
        - if list of `OptimizeResult`, then draw the corresponding traces in
          transparency, along with the average trace;
        - if tuple, then `args[i][0]` should be a string label and `args[i][1]`
          an `OptimizeResult` or a list of `OptimizeResult`.

    * `ax` [`Axes`, optional]:
        The matplotlib axes on which to draw the plot, or `None` to create
        a new one.

    * `yscale` [None or string, optional]:
        The scale for the y-axis.

    Returns
    -------
    * `ax`: [`Axes`]:
        The matplotlib axes.
    """
    ax = kwargs.get("ax", None)
    yscale = kwargs.get("yscale", None)

    if ax is None:
        ax = plt.gca()

    ax.set_title("Training loss")
    ax.set_xlabel("Epoch")
    ax.set_ylabel("Total loss per example")
    ax.grid()

    if yscale is not None:
        ax.set_yscale(yscale)

    colors = cm.viridis(np.linspace(0.25, 1.0, len(args)))
    name = None

    for results, color in zip(args, colors):
        if isinstance(results, tuple):
            name, results = results
        else:
            name = None

        if isinstance(results, OptimizeResult):
            ax.plot(range(len(results.func_vals)), results.func_vals,
                    c=color, marker=".", lw=2, label=name)

        elif isinstance(results, list):
            n_epochs = min(len(r.func_vals) for r in results)
            traces = [r.func_vals[:n_epochs] for r in results]
            for trace in traces:
                ax.plot(range(n_epochs), trace, c=color, alpha=0.2)
            ax.plot(range(n_epochs), np.mean(traces, axis=0), c=color,
                    marker=".", lw=2, label=name)

    if name:
        ax.legend(loc="best")

    return ax


def plot_roc(reports, ax=None, title="ROC"):
    """ROC curves of one report or of a `{label: EvalReport}` mapping.

    Reports without a defined AUC are left out.
    """
    if ax is None:
        ax = plt.gca()
    if not isinstance(reports, dict):
        reports = {None: reports}
    colors = cm.viridis(np.linspace(0.0, 0.9, max(len(reports), 1)))
    for (label, report), color in zip(reports.items(), colors):
        if report.auc is None:
            continue
        fpr = [point[1] for point in report.roc]
        tpr = [point[2] for point in report.roc]
        text = "AUC %.3f" % report.auc
        if label is not None:
            text = "%s (%s)" % (label, text)
        ax.plot(fpr, tpr, c=color, lw=2, label=text)
    ax.plot([0, 1], [0, 1], linestyle="--", color="grey", lw=1)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.01)
    ax.set_xlabel("False positive rate")
    ax.set_ylabel("True positive rate")
    ax.set_title(title)
    ax.legend(loc="lower right")
    return ax


def plot_embedding(Y, labels, ax=None, title="Latent embedding"):
    """Scatter of a 2-D embedding.

    `labels` are either 0/1 genuine/forged classes or arbitrary group names
    (e.g. identities), one colour per group.
    """
    if ax is None:
        ax = plt.gca()
    Y = np.asarray(Y, dtype=float)
    labels = np.asarray(labels)
    groups = list(dict.fromkeys(labels.tolist()))
    colors = cm.tab10(np.linspace(0.0, 1.0, max(len(groups), 1)))
    for group, color in zip(groups, colors):
        mask = labels == group
        if group in (0, 1):
            name = "forged" if group == FORGED_LABEL else "genuine"
        else:
            name = str(group)
        ax.scatter(Y[mask, 0], Y[mask, 1], s=12, color=color, label=name)
    ax.set_title(title)
    ax.set_xticks([])
    ax.set_yticks([])
    ax.legend(loc="best", fontsize="small")
    return ax


def plot_traversals(grids, title=None):
    """One row of decoded images per latent dimension.

    Returns the figure.
    """
    if len(grids) == 0:
        raise ValueError("Expected at least one traversal grid")
    fig, axes = plt.subplots(nrows=len(grids), ncols=1,
                             figsize=(len(grids[0].values), 1.1 * len(grids)),
                             squeeze=False)
    for ax, grid in zip(axes[:, 0], grids):
        ax.imshow(grid.montage(), cmap="gray", vmin=0.0, vmax=1.0)
        ax.set_xticks([])
        ax.set_yticks([])
        ax.set_ylabel("z%d" % grid.dim, rotation=0, labelpad=14)
    if title:
        fig.suptitle(title)
    return fig
