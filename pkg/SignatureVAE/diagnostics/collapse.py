"""Posterior collapse: how much information each latent dimension carries
and how the loss splits between reconstruction and KL over training."""
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from ..learning.vae import LossBreakdown, VaeParams, encode, kl_per_dim
from ..optimizer.train import training_matrix
from ..utils import write_json

COLLAPSE_THRESHOLD = 0.01


@dataclass
class CollapseReport:
    """
    Per-dimension KL of a trained model.

    `per_dim_kl[i]` is the data mean of the KL of latent dimension `i` and
    `collapsed_dims` lists the dimensions below `threshold` nats.
    `kl_fraction_by_epoch` holds kl / (kl + recon) of every epoch.
    """

    per_dim_kl: np.ndarray
    collapsed_dims: List[int]
    threshold: float = COLLAPSE_THRESHOLD
    kl_fraction_by_epoch: List[float] = field(default_factory=list)

    @property
    def n_collapsed(self) -> int:
        return len(self.collapsed_dims)

    @property
    def collapsed_fraction(self) -> float:
        return self.n_collapsed / len(self.per_dim_kl)

    def to_dict(self):
        return {
            "per_dim_kl": [float(v) for v in self.per_dim_kl],
            "collapsed_dims": list(self.collapsed_dims),
            "threshold": self.threshold,
            "kl_fraction_by_epoch": list(self.kl_fraction_by_epoch),
        }


def kl_fraction(history: Sequence[LossBreakdown]) -> List[float]:
    fractions = []
    for entry in history:
        denom = entry.kl + entry.recon
        fractions.append(float(entry.kl / denom) if denom > 0 else 0.0)
    return fractions


def collapse_report(params: VaeParams, data, loss_history=(), threshold=COLLAPSE_THRESHOLD,
                    one_class=True) -> CollapseReport:
    """
    Mean KL of every latent dimension over `data`, the collapsed dimensions
    and the epoch-wise KL share of the loss.

    Parameters
    ----------
    * `params` [VaeParams]:
        Trained network.

    * `data` [Manifest or array]:
        Images to encode; a manifest is restricted to genuine rows when
        `one_class` is True.

    * `loss_history` [list of LossBreakdown]:
        Training history of `params`.

    * `threshold` [float, default=0.01]:
        Dimensions with a mean KL below this many nats count as collapsed.
    """
    if threshold <= 0:
        raise ValueError("Expected `threshold` > 0, got %r" % threshold)
    X = training_matrix(data, one_class=one_class)
    mu, logvar = encode(params, X)
    per_dim = kl_per_dim(mu, logvar).mean(axis=0)
    collapsed = [int(i) for i in np.flatnonzero(per_dim < threshold)]
    return CollapseReport(per_dim, collapsed, float(threshold),
                          kl_fraction(loss_history))


def write_collapse_report(path, report: CollapseReport):
    return write_json(path, report.to_dict())


def average_loss_history(histories) -> List[LossBreakdown]:
    """Epoch-wise mean of several training histories.

    Histories may differ in length; epoch `e` averages the histories that
    reached it.
    """
    histories = [list(h) for h in histories]
    if not any(histories):
        raise ValueError("Expected at least one non-empty history")
    n_epochs = max(len(h) for h in histories)
    averaged = []
    for e in range(n_epochs):
        entries = [h[e] for h in histories if len(h) > e]
        averaged.append(LossBreakdown(
            epoch=entries[0].epoch,
            recon=float(np.mean([x.recon for x in entries])),
            kl=float(np.mean([x.kl for x in entries])),
            beta_effective=float(np.mean([x.beta_effective for x in entries])),
            total=float(np.mean([x.total for x in entries])),
        ))
    return averaged
