import numpy as np
import pytest
from numpy.testing import assert_array_equal

from SignatureVAE.learning import KNeighborsForgeryClassifier, knn_fit, knn_predict


def brute_force_knn(X_train, y_train, x, k):
    distances = [np.sqrt(np.sum((row - x) ** 2)) for row in X_train]
    order = sorted(range(len(X_train)), key=lambda i: (distances[i], i))
    score = np.mean([y_train[i] for i in order[:k]])
    return (1 if score >= 0.5 else 0), score


@pytest.mark.fast_test
def test_matches_brute_force_scan():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(200, 3))
    y = rng.integers(0, 2, 200)
    queries = rng.normal(size=(50, 3))
    for k in (1, 4, 5):
        model = knn_fit(X, y, k=k)
        labels = model.predict(queries)
        scores = model.forged_score(queries)
        for q, label, score in zip(queries, labels, scores):
            assert (label, score) == brute_force_knn(X, y, q, k)


@pytest.mark.fast_test
def test_two_clusters():
    rng = np.random.default_rng(1)
    X = np.vstack([rng.normal(0.0, 0.3, (20, 2)), rng.normal(5.0, 0.3, (20, 2))])
    y = np.array([0] * 20 + [1] * 20)
    model = knn_fit(X, y, k=5)
    assert knn_predict(model, [0.0, 0.0]) == (0, 0.0)
    assert knn_predict(model, [5.0, 5.0]) == (1, 1.0)
    assert_array_equal(model.predict(X), y)
    assert model.predict_proba(X).shape == (40, 2)


@pytest.mark.fast_test
def test_ties_go_to_lower_index_and_forged():
    X = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    y = np.array([0, 1, 1, 0])
    model = knn_fit(X, y, k=2)
    # all four points are at distance 1: the two lowest indices win
    assert_array_equal(model.kneighbors([[0.0]]), [[0, 1]])
    # a 1-1 vote is decided as forged
    assert knn_predict(model, [0.0]) == (1, 0.5)


@pytest.mark.fast_test
def test_fit_validation():
    with pytest.raises(ValueError):
        knn_fit(np.zeros((0, 2)), np.zeros(0), k=1)
    with pytest.raises(ValueError):
        knn_fit(np.zeros((3, 2)), np.zeros(3), k=4)
    with pytest.raises(ValueError):
        knn_fit(np.zeros((3, 2)), [0, 1, 2], k=1)
    with pytest.raises(ValueError):
        knn_fit(np.zeros((3, 2)), [0, 1], k=1)
    assert isinstance(knn_fit(np.zeros((1, 2)), [1], k=1), KNeighborsForgeryClassifier)
