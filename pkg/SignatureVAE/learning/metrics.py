from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from sklearn.metrics import auc as _auc
from sklearn.metrics import confusion_matrix, f1_score, recall_score, roc_curve

from ..image.manifest import FORGED_LABEL, GENUINE_LABEL


@dataclass
class EvalReport:
    """
    Binary classification summary with forged as the positive class.

    `roc` holds `(threshold, fpr, tpr)` triples from the (0, 0) corner to
    (1, 1); it is empty and `auc` is None when only one class is present.
    """

    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    recall: float
    f1: float
    roc: List[Tuple[float, float, float]] = field(default_factory=list)
    auc: Optional[float] = None

    @property
    def n(self):
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self, with_roc=False):
        d = {
            "tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn,
            "accuracy": self.accuracy, "recall": self.recall, "f1": self.f1,
            "auc": self.auc,
        }
        if with_roc:
            d["roc"] = [list(point) for point in self.roc]
        return d


def roc_points(labels, scores):
    """ROC over every distinct score threshold, highest threshold first.

    Scores lie in [0, 1]; the leading point, where nothing is flagged as
    forged, carries threshold 1.0. Returns None when `labels` hold a single
    class.
    """
    labels = np.asarray(labels, dtype=int)
    if len(np.unique(labels)) < 2:
        return None
    fpr, tpr, thresholds = roc_curve(
        labels, np.asarray(scores, dtype=float),
        pos_label=FORGED_LABEL, drop_intermediate=False,
    )
    # sklearn puts inf (or max + 1) ahead of the highest score
    thresholds = np.minimum(thresholds, 1.0)
    return [(float(t), float(f), float(p)) for t, f, p in zip(thresholds, fpr, tpr)]


def evaluate(predictions, labels, scores) -> EvalReport:
    """
    Confusion counts, accuracy, recall, F1, ROC and AUC.

    Parameters
    ----------
    * `predictions` [array-like, shape=(n,)]:
        Predicted labels, 1 for forged.

    * `labels` [array-like, shape=(n,)]:
        True labels, 1 for forged.

    * `scores` [array-like, shape=(n,)]:
        Forged scores; higher means more likely forged.

    Returns
    -------
    * `report` [EvalReport]
    """
    predictions = np.asarray(predictions, dtype=int)
    labels = np.asarray(labels, dtype=int)
    scores = np.asarray(scores, dtype=float)
    if not (len(predictions) == len(labels) == len(scores)):
        raise ValueError(
            "predictions, labels and scores differ in length: %d, %d, %d"
            % (len(predictions), len(labels), len(scores))
        )
    if len(labels) == 0:
        raise ValueError("Cannot evaluate an empty prediction set")
    tn, fp, fn, tp = confusion_matrix(
        labels, predictions, labels=[GENUINE_LABEL, FORGED_LABEL]
    ).ravel()
    roc = roc_points(labels, scores)
    area = None
    if roc is not None:
        fpr = [point[1] for point in roc]
        tpr = [point[2] for point in roc]
        area = float(_auc(fpr, tpr))
    return EvalReport(
        tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn),
        accuracy=float(tp + tn) / len(labels),
        recall=float(recall_score(labels, predictions, pos_label=FORGED_LABEL,
                                  zero_division=0)),
        f1=float(f1_score(labels, predictions, pos_label=FORGED_LABEL,
                          zero_division=0)),
        roc=roc or [],
        auc=area,
    )
