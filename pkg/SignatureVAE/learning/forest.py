from dataclasses import dataclass, asdict

import numpy as np
from sklearn.ensemble import RandomForestClassifier as _sk_RandomForestClassifier

from ..image.manifest import FORGED_LABEL, GENUINE_LABEL
from ..utils import as_sklearn_random_state


@dataclass(frozen=True)
class ForestConfig:
    """
    Random forest settings.

    Parameters
    ----------
    * `n_trees` [int, default=100]:
        Number of trees.

    * `max_depth` [int, default=8]:
        Maximum depth of every tree.

    * `min_leaf` [int, default=2]:
        Minimum number of samples in a leaf.

    * `max_features` [str, int, float or None, default="sqrt"]:
        Candidate features per split, as in scikit-learn.

    * `bootstrap` [bool, default=True]:
        Train each tree on n draws with replacement.
    """

    n_trees: int = 100
    max_depth: int = 8
    min_leaf: int = 2
    max_features: object = "sqrt"
    bootstrap: bool = True

    def __post_init__(self):
        for name in ("n_trees", "max_depth", "min_leaf"):
            if getattr(self, name) < 1:
                raise ValueError(
                    "Expected `%s` >= 1, got %r" % (name, getattr(self, name))
                )

    def to_dict(self):
        return asdict(self)


def _forged_column(proba, classes):
    """Forged probability from a `predict_proba` output, also when only one
    class was seen during fitting."""
    classes = list(classes)
    if FORGED_LABEL in classes:
        return proba[:, classes.index(FORGED_LABEL)]
    return np.zeros(len(proba))


def _return_score_std(X, trees, classes):
    """
    Returns the spread of the per-tree forged probabilities at `X`.

    The forest score is the mean over trees of the leaf forged-probability,
    so `std` here is the standard deviation of that mean's terms, with each
    tree weighted `1 / len(trees)`.

    Parameters
    ----------
    * `X` [array-like, shape=(n_samples, n_features)]:
        Input data.

    * `trees` [list, shape=(n_estimators,)]:
        Fitted trees, as in the ``estimators_`` attribute.

    * `classes` [array-like]:
        Class labels of the forest.

    Returns
    -------
    * `std` [array-like, shape=(n_samples,)]:
        Standard deviation of the tree scores.
    """
    first = np.zeros(len(X))
    second = np.zeros(len(X))
    for tree in trees:
        p = _forged_column(tree.predict_proba(X), classes)
        first += p
        second += p ** 2
    first /= len(trees)
    second /= len(trees)
    var = second - first ** 2
    var[var < 0.0] = 0.0
    return var ** 0.5


class RandomForestForgeryClassifier(_sk_RandomForestClassifier):
    """
    Random forest between genuine (0) and forged (1) feature vectors.

    Splits minimise Gini impurity over midpoints of sorted feature values.
    The score of a sample is the mean forged-probability of the leaves it
    reaches, and a sample is labelled forged when that score is at least
    0.5.

    Parameters
    ----------
    * `n_estimators` [int, default=100]:
        The number of trees in the forest.

    * `max_depth` [int, default=8]:
        The maximum depth of the tree.

    * `min_samples_leaf` [int, default=2]:
        The minimum number of samples required to be at a leaf node.

    * `max_features` [str, int, float or None, default="sqrt"]:
        The number of features to consider when looking for the best split.

    * `bootstrap` [bool, default=True]:
        Whether bootstrap samples are used when building trees.

    * `oob_score` [bool, default=False]:
        Whether to keep out-of-bag forged scores in `oob_forged_score_`.

    * `n_jobs` [int, default=1]:
        The number of jobs to run in parallel for both `fit` and `predict`.

    * `random_state` [int or None, default=None]:
        Seed of the bootstrap and feature draws.
    """

    def __init__(self, n_estimators=100, max_depth=8, min_samples_leaf=2,
                 max_features="sqrt", bootstrap=True, oob_score=False,
                 n_jobs=1, random_state=None):
        super(RandomForestForgeryClassifier, self).__init__(
            n_estimators=n_estimators, criterion="gini",
            max_depth=max_depth,
            min_samples_leaf=min_samples_leaf,
            max_features=max_features, bootstrap=bootstrap,
            oob_score=oob_score, n_jobs=n_jobs,
            random_state=random_state)

    @classmethod
    def from_config(cls, cfg: ForestConfig, rng=None, oob_score=False, n_jobs=1):
        return cls(
            n_estimators=cfg.n_trees,
            max_depth=cfg.max_depth,
            min_samples_leaf=cfg.min_leaf,
            max_features=cfg.max_features,
            bootstrap=cfg.bootstrap,
            oob_score=oob_score and cfg.bootstrap,
            n_jobs=n_jobs,
            random_state=as_sklearn_random_state(rng),
        )

    def forged_score(self, X, return_std=False):
        """
        Mean forged-probability over trees.

        Parameters
        ----------
        * `X` [array-like, shape=(n_samples, n_features)]:
            Input data.

        * `return_std` [bool, default=False]:
            Whether or not to return the spread of the per-tree scores.

        Returns
        -------
        * `score` [array, shape=(n_samples,)]:
            Forged score in [0, 1].

        * `std` [array, shape=(n_samples,)]:
            Per-tree score spread. Only if `return_std` is True.
        """
        score = _forged_column(self.predict_proba(X), self.classes_)
        if return_std:
            return score, _return_score_std(X, self.estimators_, self.classes_)
        return score

    def predict(self, X):
        return np.where(self.forged_score(X) >= 0.5, FORGED_LABEL, GENUINE_LABEL)

    @property
    def oob_forged_score_(self):
        """Out-of-bag forged score of every training sample (requires
        `oob_score=True`)."""
        return _forged_column(self.oob_decision_function_, self.classes_)


def rf_fit(features, labels, cfg: ForestConfig = None, rng=None,
           oob_score=False) -> RandomForestForgeryClassifier:
    cfg = cfg or ForestConfig()
    X = np.asarray(features, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    model = RandomForestForgeryClassifier.from_config(cfg, rng, oob_score=oob_score)
    return model.fit(X, np.asarray(labels, dtype=int))


def rf_predict(model: RandomForestForgeryClassifier, x):
    """Label and forged score of a single feature vector."""
    score = float(model.forged_score(np.atleast_2d(x))[0])
    return (FORGED_LABEL if score >= 0.5 else GENUINE_LABEL), score
