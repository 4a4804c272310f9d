import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, ClassifierMixin

from ..image.manifest import FORGED_LABEL, GENUINE_LABEL


class KNeighborsForgeryClassifier(BaseEstimator, ClassifierMixin):
    """
    Euclidean k-nearest-neighbour vote between genuine (0) and forged (1).

    The score of a query is the fraction of its `k` neighbours that are
    forged. Equal distances are broken in favour of the training sample with
    the lower index, and a tied vote is decided as forged.

    Parameters
    ----------
    * `k` [int, default=5]:
        Number of neighbours. Must not exceed the number of training
        samples.
    """

    def __init__(self, k=5):
        self.k = k

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=int)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if len(X) == 0:
            raise ValueError("Cannot fit a kNN model on an empty training set")
        if len(X) != len(y):
            raise ValueError("Got %d samples but %d labels" % (len(X), len(y)))
        if not 1 <= self.k <= len(X):
            raise ValueError(
                "Expected 1 <= `k` <= %d (training size), got %d" % (len(X), self.k)
            )
        if not np.isin(y, (GENUINE_LABEL, FORGED_LABEL)).all():
            raise ValueError("Labels must be 0 (genuine) or 1 (forged)")
        self.X_train_ = X
        self.y_train_ = y
        self.classes_ = np.array([GENUINE_LABEL, FORGED_LABEL])
        return self

    def kneighbors(self, X):
        """Indices of the `k` nearest training samples of every query row."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, self.X_train_.shape[1])
        distances = cdist(X, self.X_train_)
        order = np.argsort(distances, axis=1, kind="stable")
        return order[:, :self.k]

    def forged_score(self, X):
        neighbours = self.kneighbors(X)
        return self.y_train_[neighbours].mean(axis=1)

    def predict_proba(self, X):
        score = self.forged_score(X)
        return np.column_stack([1.0 - score, score])

    def predict(self, X):
        return np.where(self.forged_score(X) >= 0.5, FORGED_LABEL, GENUINE_LABEL)


def knn_fit(features, labels, k=5) -> KNeighborsForgeryClassifier:
    return KNeighborsForgeryClassifier(k=k).fit(features, labels)


def knn_predict(model: KNeighborsForgeryClassifier, x):
    """Label and forged score of a single feature vector."""
    score = float(model.forged_score(np.atleast_2d(x))[0])
    return (FORGED_LABEL if score >= 0.5 else GENUINE_LABEL), score
