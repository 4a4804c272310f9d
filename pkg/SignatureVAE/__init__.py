"""
`SignatureVAE` detects forged signatures with a one-class variational
autoencoder: the network is trained on genuine signatures only, and the
latent means and reconstruction errors it produces are fed to simple
classifiers. The package also holds the diagnostics used to study the
network (posterior collapse, latent traversals, 2-D embeddings) and a
synthetic signature generator for experiments without scanned data.

## Install

pip install SignatureVAE

## Usage

sigvae synth --out data
sigvae eval --manifest data/manifest.csv --out results

"""

from . import callbacks
from . import diagnostics
from . import image
from . import learning
from . import model_systems
from . import optimizer
from .config import ConfigError, RunConfig, load_config
from .image import Manifest, preprocess, read_manifest
from .learning.vae import VaeConfig, load_checkpoint, save_checkpoint
from .model_systems import SignatureSystem, get_model_system, make_dataset
from .optimizer import train
from .protocol import compare_betas, run_protocol
from .plots import loss_breakdown_plot, plot_loss_breakdown, plot_roc

__version__ = "0.1.0"


__all__ = (
    "callbacks",
    "diagnostics",
    "image",
    "learning",
    "model_systems",
    "optimizer",
    "ConfigError",
    "RunConfig",
    "load_config",
    "Manifest",
    "preprocess",
    "read_manifest",
    "VaeConfig",
    "load_checkpoint",
    "save_checkpoint",
    "SignatureSystem",
    "get_model_system",
    "make_dataset",
    "train",
    "compare_betas",
    "run_protocol",
    "loss_breakdown_plot",
    "plot_loss_breakdown",
    "plot_roc",
    "__version__",
)
