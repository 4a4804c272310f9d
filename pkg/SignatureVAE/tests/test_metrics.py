import numpy as np
import pytest

from SignatureVAE.learning import evaluate, roc_points


@pytest.mark.fast_test
def test_perfect_ordering():
    labels = np.array([0, 0, 0, 1, 1])
    scores = np.array([0.1, 0.2, 0.3, 0.8, 0.9])
    report = evaluate((scores >= 0.5).astype(int), labels, scores)
    assert report.auc == 1.0
    assert (report.tp, report.fp, report.tn, report.fn) == (2, 0, 3, 0)
    assert report.accuracy == report.recall == report.f1 == 1.0
    assert report.n == 5
    assert report.roc[-1][1:] == (1.0, 1.0)
    assert report.roc[0][1:] == (0.0, 0.0)


@pytest.mark.fast_test
def test_random_scores_give_chance_auc():
    rng = np.random.default_rng(0)
    labels = rng.integers(0, 2, 2000)
    scores = rng.random(2000)
    report = evaluate((scores >= 0.5).astype(int), labels, scores)
    assert abs(report.auc - 0.5) < 0.05


@pytest.mark.fast_test
def test_counts_and_scores():
    labels = [1, 1, 1, 0, 0, 0]
    predictions = [1, 0, 0, 1, 0, 0]
    scores = [0.9, 0.4, 0.3, 0.6, 0.2, 0.1]
    report = evaluate(predictions, labels, scores)
    assert (report.tp, report.fp, report.tn, report.fn) == (1, 1, 2, 2)
    assert report.accuracy == pytest.approx(0.5)
    assert report.recall == pytest.approx(1 / 3)
    assert report.f1 == pytest.approx(0.4)
    assert report.auc == pytest.approx(7 / 9)


@pytest.mark.fast_test
def test_single_class():
    report = evaluate([0, 0], [0, 0], [0.3, 0.4])
    assert report.auc is None
    assert report.roc == []
    assert report.recall == 0.0 and report.f1 == 0.0
    assert report.accuracy == 1.0
    assert roc_points([1, 1], [0.1, 0.2]) is None
    assert "roc" not in report.to_dict()
    assert report.to_dict(with_roc=True)["roc"] == []


@pytest.mark.fast_test
def test_input_validation():
    with pytest.raises(ValueError):
        evaluate([0, 1], [0, 1], [0.5])
    with pytest.raises(ValueError):
        evaluate([], [], [])


@pytest.mark.fast_test
def test_roc_thresholds_stay_in_score_range():
    labels = [0, 1, 1, 0, 1]
    scores = [0.2, 0.8, 1.0, 0.4, 0.6]
    roc = roc_points(labels, scores)
    thresholds = [point[0] for point in roc]
    assert np.all(np.isfinite(thresholds))
    assert roc[0] == (1.0, 0.0, 0.0)
    assert max(thresholds) == 1.0
    assert thresholds == sorted(thresholds, reverse=True)
    assert roc[-1][1:] == (1.0, 1.0)
