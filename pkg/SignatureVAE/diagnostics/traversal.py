"""Latent traversals: decode a sweep of one latent coordinate with all
others held at zero, and the beta sweep that produces them for several KL
weights."""
import logging
import os
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from ..image.netpbm import save_image
from ..learning.vae import VaeConfig, VaeParams, generate, save_checkpoint
from ..learning.vae.checkpoint import write_history_csv
from ..optimizer.train import train, training_matrix
from ..utils import write_json
from .collapse import CollapseReport, collapse_report, write_collapse_report

logger = logging.getLogger(__name__)

DEFAULT_BETAS = (1.0, 1.25, 1.5, 1.75, 2.0, 5.0)
SWEEP_LO, SWEEP_HI, SWEEP_STEPS = -4.0, 4.0, 9


@dataclass
class TraversalGrid:
    """Images decoded along one latent dimension, one per sweep value."""

    dim: int
    values: np.ndarray
    images: np.ndarray

    def montage(self, gap: int = 1) -> np.ndarray:
        """The images side by side, separated by `gap` white columns."""
        side = self.images.shape[1]
        spacer = np.ones((side, gap))
        parts = []
        for i, img in enumerate(self.images):
            if i:
                parts.append(spacer)
            parts.append(img)
        return np.hstack(parts)


def latent_traversal(params: VaeParams, dim: int, lo: float = SWEEP_LO,
                     hi: float = SWEEP_HI, steps: int = SWEEP_STEPS) -> TraversalGrid:
    latent_dim = params.config.latent_dim
    if not 0 <= dim < latent_dim:
        raise ValueError(
            "Expected 0 <= `dim` < %d, got %d" % (latent_dim, dim)
        )
    if not lo < hi:
        raise ValueError("Expected `lo` < `hi`, got %r, %r" % (lo, hi))
    if steps < 2:
        raise ValueError("Expected `steps` >= 2, got %d" % steps)
    values = np.linspace(lo, hi, steps)
    Z = np.zeros((steps, latent_dim))
    Z[:, dim] = values
    return TraversalGrid(dim, values, generate(params, Z))


def all_traversals(params: VaeParams, lo=SWEEP_LO, hi=SWEEP_HI, steps=SWEEP_STEPS
                   ) -> List[TraversalGrid]:
    return [latent_traversal(params, d, lo, hi, steps)
            for d in range(params.config.latent_dim)]


def write_traversals(grids: Sequence[TraversalGrid], outdir, prefix="traversal"):
    """One PGM montage per dimension plus an index JSON describing them.

    Returns the written paths.
    """
    os.makedirs(outdir, exist_ok=True)
    written, index = [], []
    for grid in grids:
        name = "%s_dim%02d.pgm" % (prefix, grid.dim)
        written.append(save_image(os.path.join(outdir, name), grid.montage()))
        index.append({
            "dim": grid.dim,
            "file": name,
            "values": [float(v) for v in grid.values],
        })
    written.append(write_json(os.path.join(outdir, prefix + "_index.json"), index))
    return written


@dataclass
class BetaSweepResult:
    beta: float
    params: VaeParams
    history: list
    grids: List[TraversalGrid] = field(default_factory=list)
    collapse: CollapseReport = None


def beta_sweep(data, base_cfg: VaeConfig, betas: Sequence[float] = DEFAULT_BETAS,
               lo=SWEEP_LO, hi=SWEEP_HI, steps=SWEEP_STEPS, callback=None
               ) -> List[BetaSweepResult]:
    """
    Train one model per KL weight on the same data with the same seed, and
    traverse every latent dimension of each.

    Parameters
    ----------
    * `data` [Manifest or array]:
        Training images (genuine rows of a manifest).

    * `base_cfg` [VaeConfig]:
        Settings shared by all models; only `beta` changes.

    * `betas` [list of float, default=(1, 1.25, 1.5, 1.75, 2, 5)]:
        KL weights to train with.
    """
    if len(betas) == 0:
        raise ValueError("Expected at least one beta")
    X = training_matrix(data)
    results = []
    for beta in betas:
        cfg = base_cfg.replace(beta=float(beta))
        logger.info("Training beta=%g", beta)
        params, history = train(X, cfg, callback=callback)
        results.append(BetaSweepResult(
            beta=float(beta),
            params=params,
            history=history,
            grids=all_traversals(params, lo, hi, steps),
            collapse=collapse_report(params, X, history),
        ))
    return results


def write_beta_sweep(results: Sequence[BetaSweepResult], outdir):
    """Checkpoint, history, collapse report and traversals of every model,
    each under `beta_<value>/`. Returns the written paths."""
    written = []
    for res in results:
        sub = os.path.join(outdir, "beta_%s" % repr(res.beta))
        written.extend(save_checkpoint(os.path.join(sub, "model.svae"),
                                       res.params, res.history))
        written.append(write_history_csv(os.path.join(sub, "history.csv"),
                                         res.history))
        written.append(write_collapse_report(os.path.join(sub, "collapse.json"),
                                             res.collapse))
        written.extend(write_traversals(res.grids, sub))
    return written
