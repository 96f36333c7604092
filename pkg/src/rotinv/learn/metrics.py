"""Binary classification metrics. Label 1 (spiral) is the positive class."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from ..errors import SingleClass


def _check_binary(scores, labels):
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = np.asarray(labels).ravel().astype(int)
    if s.size != y.size:
        raise ValueError("scores and labels differ in length")
    if not (np.any(y == 1) and np.any(y == 0)):
        raise SingleClass("both classes must be present")
    return s, y


def auc(scores, labels) -> float:
    """Mann-Whitney estimate of the ROC area; tied pairs count one half."""
    s, y = _check_binary(scores, labels)
    ranks = rankdata(s)
    n_pos = int(np.sum(y == 1))
    n_neg = y.size - n_pos
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def confusion_metrics(scores, labels, threshold: float = 0.0) -> dict[str, float]:
    """TPR, FPR, FNR, TNR and f-score with ``score > threshold`` predicted positive."""
    s, y = _check_binary(scores, labels)
    pred = s > threshold
    pos = y == 1
    tp = int(np.sum(pred & pos))
    fp = int(np.sum(pred & ~pos))
    fn = int(np.sum(~pred & pos))
    tn = int(np.sum(~pred & ~pos))
    p, n = tp + fn, fp + tn
    denom = 2 * tp + fp + fn
    return {
        "tpr": tp / p,
        "fpr": fp / n,
        "fnr": fn / p,
        "tnr": tn / n,
        "fscore": 2 * tp / denom if denom else 0.0,
    }
