"""Per-identity one-class evaluation.

For every identity a VAE is trained on part of its genuine signatures. The
held-out genuine signatures and the identity's forgeries are encoded, split
in half stratified by label, and classified with kNN and a random forest
on each feature mode.
"""
import csv
import logging
import os
import warnings
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from sklearn.model_selection import train_test_split

from .image.manifest import FORGED, GENUINE, Manifest
from .learning.features import FEATURE_MODES, check_mode, features_from_matrix
from .learning.forest import ForestConfig, rf_fit
from .learning.knn import knn_fit
from .learning.metrics import EvalReport, evaluate
from .learning.vae import VaeConfig, write_history_csv
from .optimizer.train import train
from .utils import (
    as_sklearn_random_state,
    derive_seed,
    fmt_float,
    get_n_jobs,
    mean_or_none,
    spawn_generator,
    write_json,
)

logger = logging.getLogger(__name__)

CLASSIFIERS = ("knn", "rf")
REPORT_HEADER = ("identity", "mode", "classifier", "accuracy", "recall", "f1", "auc")
ROC_HEADER = ("threshold", "fpr", "tpr")
MIN_GENUINE = 4


class SkippedIdentityWarning(UserWarning):
    """An identity had too few images to be evaluated."""


@dataclass(frozen=True)
class ClassifierConfig:
    """
    Classifier and split settings of the protocol.

    Parameters
    ----------
    * `k` [int, default=5]:
        kNN neighbours; capped at the classifier training size.

    * `forest` [ForestConfig]:
        Random forest settings.

    * `vae_train_fraction` [float, default=0.7]:
        Share of an identity's genuine images the VAE is trained on.

    * `classifier_train_fraction` [float, default=0.5]:
        Share of the encoded images the classifiers are fitted on.

    * `modes` [tuple of str, default=("latent", "recon", "both")]:
        Feature modes to evaluate.

    * `classifiers` [tuple of str, default=("knn", "rf")]:
        Classifiers to evaluate.
    """

    k: int = 5
    forest: ForestConfig = field(default_factory=ForestConfig)
    vae_train_fraction: float = 0.7
    classifier_train_fraction: float = 0.5
    modes: Tuple[str, ...] = FEATURE_MODES
    classifiers: Tuple[str, ...] = CLASSIFIERS

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("Expected `k` >= 1, got %d" % self.k)
        for name in ("vae_train_fraction", "classifier_train_fraction"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError("Expected 0 < `%s` < 1, got %r" % (name, value))
        for mode in self.modes:
            check_mode(mode)
        for clf in self.classifiers:
            if clf not in CLASSIFIERS:
                raise ValueError(
                    "Expected classifiers from %s, got %r" % (CLASSIFIERS, clf)
                )

    def to_dict(self):
        return asdict(self)


@dataclass
class IdentityResult:
    """Reports of one identity, keyed by `(mode, classifier)`."""

    identity: str
    reports: Dict[Tuple[str, str], EvalReport] = field(default_factory=dict)
    history: list = field(default_factory=list)
    skipped: Optional[str] = None


@dataclass
class ProtocolReport:
    """Per-identity results and their unweighted macro average."""

    results: List[IdentityResult]
    config: dict = field(default_factory=dict)

    @property
    def evaluated(self) -> List[IdentityResult]:
        return [r for r in self.results if r.skipped is None]

    @property
    def skipped(self) -> Dict[str, str]:
        return {r.identity: r.skipped for r in self.results if r.skipped is not None}

    @property
    def histories(self) -> Dict[str, list]:
        return {r.identity: r.history for r in self.evaluated}

    def keys(self) -> List[Tuple[str, str]]:
        keys = []
        for result in self.evaluated:
            for key in result.reports:
                if key not in keys:
                    keys.append(key)
        return keys

    def macro(self) -> Dict[Tuple[str, str], dict]:
        """Mean accuracy, recall, F1 and AUC per (mode, classifier).

        Identities without a defined AUC are left out of the AUC mean only.
        """
        out = {}
        for key in self.keys():
            reports = [r.reports[key] for r in self.evaluated if key in r.reports]
            out[key] = {
                "accuracy": mean_or_none([rep.accuracy for rep in reports]),
                "recall": mean_or_none([rep.recall for rep in reports]),
                "f1": mean_or_none([rep.f1 for rep in reports]),
                "auc": mean_or_none([rep.auc for rep in reports]),
                "n_identities": len(reports),
            }
        return out

    def rows(self):
        for result in self.evaluated:
            for (mode, clf), rep in result.reports.items():
                yield (result.identity, mode, clf, rep.accuracy, rep.recall,
                       rep.f1, rep.auc)

    def summary(self) -> dict:
        return {
            "config": self.config,
            "macro": {
                "%s/%s" % key: value for key, value in self.macro().items()
            },
            "identities": [r.identity for r in self.evaluated],
            "skipped": self.skipped,
        }

    def write(self, outdir, prefix="report"):
        """Write `<prefix>.csv`, `<prefix>.json` and one ROC CSV per identity,
        mode and classifier. Returns the written paths."""
        os.makedirs(outdir, exist_ok=True)
        written = []
        csv_path = os.path.join(outdir, prefix + ".csv")
        with open(csv_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(REPORT_HEADER)
            for row in self.rows():
                writer.writerow(list(row[:3]) + [_fmt_metric(v) for v in row[3:]])
        written.append(csv_path)
        written.append(write_json(os.path.join(outdir, prefix + ".json"),
                                  self.summary()))
        for result in self.evaluated:
            for (mode, clf), rep in result.reports.items():
                if not rep.roc:
                    continue
                path = os.path.join(outdir, "roc", result.identity,
                                    "%s_%s.csv" % (mode, clf))
                written.append(write_roc_csv(path, rep.roc))
        return written

    def write_histories(self, outdir):
        """Write `history/<identity>.csv` for every evaluated identity with a
        loss history. Returns the written paths."""
        written = []
        for identity, history in self.histories.items():
            if not history:
                continue
            os.makedirs(os.path.join(outdir, "history"), exist_ok=True)
            path = os.path.join(outdir, "history", "%s.csv" % identity)
            written.append(write_history_csv(path, history))
        return written


def _fmt_metric(value):
    return "NA" if value is None else fmt_float(value)


def write_roc_csv(path, roc):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(ROC_HEADER)
        for point in roc:
            writer.writerow([fmt_float(v) for v in point])
    return path


def _classify(clf, clf_cfg, X_train, y_train, X_test, rng):
    if clf == "knn":
        model = knn_fit(X_train, y_train, k=min(clf_cfg.k, len(X_train)))
    else:
        model = rf_fit(X_train, y_train, clf_cfg.forest, rng=rng)
    return model.predict(X_test), model.forged_score(X_test)


def evaluate_identity(
    manifest: Manifest,
    identity: str,
    vae_cfg: VaeConfig,
    clf_cfg: ClassifierConfig,
    seed: int,
    stream_id: int,
) -> IdentityResult:
    """Run the one-class protocol for a single identity.

    All randomness comes from the `(seed, stream_id)` child stream, so the
    result does not depend on which other identities are evaluated.
    """
    genuine = manifest.indices(identity=identity, label=GENUINE)
    forged = manifest.indices(identity=identity, label=FORGED)
    if len(genuine) < MIN_GENUINE:
        return IdentityResult(
            identity, skipped="%d genuine images, need at least %d"
            % (len(genuine), MIN_GENUINE))
    if not forged:
        return IdentityResult(identity, skipped="no forged images")

    rng = spawn_generator(seed, stream_id)
    vae_train, held_out = train_test_split(
        genuine, train_size=clf_cfg.vae_train_fraction,
        random_state=as_sklearn_random_state(rng),
    )
    eval_rows = list(held_out) + list(forged)
    labels = manifest.labels[eval_rows]
    n_per_class = np.bincount(labels, minlength=2)
    if n_per_class.min() < 2:
        return IdentityResult(
            identity, skipped="too few images per class to stratify (%d genuine, "
            "%d forged)" % tuple(n_per_class))

    X_train = manifest.matrix(list(vae_train))
    cfg = vae_cfg.replace(input_dim=X_train.shape[1],
                          seed=derive_seed(vae_cfg.seed, stream_id))
    params, history = train(X_train, cfg)

    features = features_from_matrix(
        params, manifest.matrix(eval_rows), labels,
        paths=[manifest.rows[i].path for i in eval_rows],
    )
    clf_train, clf_test = train_test_split(
        np.arange(len(eval_rows)), train_size=clf_cfg.classifier_train_fraction,
        stratify=labels, random_state=as_sklearn_random_state(rng),
    )
    result = IdentityResult(identity, history=history)
    for mode in clf_cfg.modes:
        fs = features.with_mode(mode)
        fs_train, fs_test = fs.subset(clf_train), fs.subset(clf_test)
        scaler = fs_train.fit_recon_scaler() if mode == "both" else None
        X_fit, X_eval = fs_train.matrix(scaler), fs_test.matrix(scaler)
        for clf in clf_cfg.classifiers:
            predictions, scores = _classify(
                clf, clf_cfg, X_fit, fs_train.labels, X_eval, rng)
            result.reports[(mode, clf)] = evaluate(
                predictions, fs_test.labels, scores)
    return result


def run_protocol(
    manifest: Manifest,
    vae_cfg: VaeConfig,
    mode=None,
    split_seed: int = 0,
    clf_cfg: Optional[ClassifierConfig] = None,
    n_jobs=None,
) -> ProtocolReport:
    """
    Evaluate every identity of `manifest` and macro-average the results.

    Parameters
    ----------
    * `manifest` [Manifest]:
        Labelled images of at least two identities.

    * `vae_cfg` [VaeConfig]:
        Network settings; `input_dim` is taken from the images and the seed
        is derived per identity from `vae_cfg.seed`.

    * `mode` [str or list of str, optional]:
        Feature modes to evaluate; defaults to `clf_cfg.modes`.

    * `split_seed` [int, default=0]:
        Seed of the splits and forests; identity `i` uses child stream `i`.

    * `clf_cfg` [ClassifierConfig, optional]:
        Classifier settings.

    * `n_jobs` [int, optional]:
        Parallel identities; `SIGVAE_THREADS` when None.

    Returns
    -------
    * `report` [ProtocolReport]
    """
    clf_cfg = clf_cfg or ClassifierConfig()
    if mode is not None:
        modes = (mode,) if isinstance(mode, str) else tuple(mode)
        clf_cfg = replace(clf_cfg, modes=modes)
    identities = manifest.identities
    if len(identities) < 2:
        raise ValueError(
            "Expected a manifest with >= 2 identities, got %d" % len(identities)
        )
    logger.info("Evaluating %d identities", len(identities))
    results = Parallel(n_jobs=get_n_jobs(n_jobs))(
        delayed(evaluate_identity)(manifest, identity, vae_cfg, clf_cfg,
                                   split_seed, i)
        for i, identity in enumerate(identities)
    )
    for result in results:
        if result.skipped is not None:
            warnings.warn("Skipping identity %s: %s"
                          % (result.identity, result.skipped),
                          SkippedIdentityWarning)
    report = ProtocolReport(
        list(results),
        config={
            "vae": vae_cfg.to_dict(),
            "classifier": clf_cfg.to_dict(),
            "split_seed": split_seed,
        },
    )
    for key, values in report.macro().items():
        logger.info("%s/%s: accuracy %s, auc %s", key[0], key[1],
                    values["accuracy"], values["auc"])
    return report


def compare_betas(
    manifest: Manifest,
    base_cfg: VaeConfig,
    betas: Sequence[float] = (1.0, 0.001),
    split_seed: int = 0,
    clf_cfg: Optional[ClassifierConfig] = None,
    n_jobs=None,
) -> Dict[float, ProtocolReport]:
    """Rerun the protocol with each KL weight on identical splits."""
    if len(betas) == 0:
        raise ValueError("Expected at least one beta")
    return {
        float(beta): run_protocol(manifest, base_cfg.replace(beta=float(beta)),
                                  split_seed=split_seed, clf_cfg=clf_cfg,
                                  n_jobs=n_jobs)
        for beta in betas
    }


def write_beta_comparison(reports: Dict[float, ProtocolReport], outdir):
    """One report directory per beta plus `comparison.json` with the macro
    averages side by side."""
    written = []
    comparison = {}
    for beta, report in reports.items():
        sub = os.path.join(outdir, "beta_%s" % fmt_float(beta))
        written.extend(report.write(sub))
        comparison[fmt_float(beta)] = {
            "%s/%s" % key: value for key, value in report.macro().items()
        }
    os.makedirs(outdir, exist_ok=True)
    written.append(write_json(os.path.join(outdir, "comparison.json"), comparison))
    return written
