"""Downstream evaluation: KNN prediction on a feature subset, accuracy,
macro-averaged F1, and prediction timing.

"Balanced F-score" here means the macro average of per-class F1: every
class present in the truth or the predictions contributes equally,
regardless of support. Method comparisons depend on this reading, so it
is fixed here rather than configurable.
"""

import time
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass
class EvalReport:
    """Metrics of one prediction run; recomputable from stored predictions."""

    accuracy: float
    balanced_f: float
    predict_time: float
    subset: list
    n_neighbors: int
    predictions: np.ndarray


def knn_predict(train, test, subset, n_neighbors=5):
    """Majority label among the n_neighbors Euclidean-nearest train rows,
    restricted to the subset columns.

    Distance ties go to the lower train index; vote ties go to the class
    appearing earliest in the neighbor list.
    """
    subset = list(subset)
    if not subset:
        raise DataError("empty feature subset")
    for j in subset:
        if not 0 <= j < train.n_features:
            raise DataError(f"subset index {j} out of range")
    if n_neighbors < 1 or n_neighbors > train.n_instances:
        raise DataError(
            f"n_neighbors must be in [1, {train.n_instances}], got {n_neighbors}"
        )

    a = train.instances[:, subset]
    b = test.instances[:, subset]
    labels = train.labels
    preds = []
    for row in b:
        d2 = np.sum((a - row) ** 2, axis=1)
        order = np.argsort(d2, kind="stable")[:n_neighbors]
        preds.append(_majority(labels[order]))
    return np.array(preds, dtype=object)


def _majority(neighbor_labels):
    counts = {}
    first_seen = {}
    for pos, lab in enumerate(neighbor_labels.tolist()):
        counts[lab] = counts.get(lab, 0) + 1
        first_seen.setdefault(lab, pos)
    return max(counts, key=lambda lab: (counts[lab], -first_seen[lab]))


def accuracy(pred, truth):
    """Fraction of exact matches."""
    pred, truth = _paired(pred, truth)
    return float(np.mean(pred == truth))


def balanced_f(pred, truth):
    """Macro-averaged F1 over the classes present in truth or predictions.

    Per-class F1 = 2PR/(P+R); precision/recall/F1 with a zero denominator
    are defined as 0.
    """
    pred, truth = _paired(pred, truth)
    classes = list(dict.fromkeys(truth.tolist() + pred.tolist()))
    f1s = []
    for c in classes:
        tp = float(np.sum((pred == c) & (truth == c)))
        fp = float(np.sum((pred == c) & (truth != c)))
        fn = float(np.sum((pred != c) & (truth == c)))
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1s.append(
            2.0 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
    return float(np.mean(f1s))


def _paired(pred, truth):
    pred = np.asarray(pred, dtype=object)
    truth = np.asarray(truth, dtype=object)
    if pred.shape != truth.shape:
        raise DataError(f"length mismatch: {pred.shape} vs {truth.shape}")
    return pred, truth


def evaluate(train, test, subset, n_neighbors=5):
    """Timed KNN run plus metrics against the test labels."""
    t0 = time.perf_counter()
    preds = knn_predict(train, test, subset, n_neighbors=n_neighbors)
    elapsed = time.perf_counter() - t0
    return EvalReport(
        accuracy=accuracy(preds, test.labels),
        balanced_f=balanced_f(preds, test.labels),
        predict_time=elapsed,
        subset=list(subset),
        n_neighbors=n_neighbors,
        predictions=preds,
    )
