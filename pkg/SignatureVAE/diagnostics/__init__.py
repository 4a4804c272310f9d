from .collapse import (
    COLLAPSE_THRESHOLD,
    CollapseReport,
    average_loss_history,
    collapse_report,
    kl_fraction,
    write_collapse_report,
)
from .traversal import (
    DEFAULT_BETAS,
    BetaSweepResult,
    TraversalGrid,
    all_traversals,
    beta_sweep,
    latent_traversal,
    write_beta_sweep,
    write_traversals,
)
from .embedding import (
    DuplicatePointsWarning,
    fit_perplexity,
    pca_2d,
    tsne_2d,
    write_embedding_csv,
)
from .data_size import DataSizeResult, data_size_experiment

__all__ = [
    "COLLAPSE_THRESHOLD",
    "CollapseReport",
    "average_loss_history",
    "collapse_report",
    "kl_fraction",
    "write_collapse_report",
    "DEFAULT_BETAS",
    "BetaSweepResult",
    "TraversalGrid",
    "all_traversals",
    "beta_sweep",
    "latent_traversal",
    "write_beta_sweep",
    "write_traversals",
    "DuplicatePointsWarning",
    "fit_perplexity",
    "pca_2d",
    "tsne_2d",
    "write_embedding_csv",
    "DataSizeResult",
    "data_size_experiment",
]
