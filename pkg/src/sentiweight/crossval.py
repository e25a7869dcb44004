"""Stratified k-fold cross-validation with pooled metrics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classifiers import HyperParams, train
from .corpus import stratified_fold_indices
from .dataset import POSITIVE, Dataset


@dataclass
class Metrics:
    """Binary metrics from one pooled confusion matrix.

    ``confusion[i][j]`` counts truth i predicted as j, index 0 = positive.
    """

    accuracy: float
    precision_positive: float
    precision_negative: float
    precision_macro: float
    confusion: list[list[int]]
    extras: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(map(sum, self.confusion))

    def to_dict(self) -> dict:
        d = {
            "accuracy": self.accuracy,
            "precision_positive": self.precision_positive,
            "precision_negative": self.precision_negative,
            "precision_macro": self.precision_macro,
            "confusion": self.confusion,
        }
        if self.extras:
            d["extras"] = self.extras
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Metrics":
        return cls(d["accuracy"], d["precision_positive"], d["precision_negative"],
                   d["precision_macro"], [list(r) for r in d["confusion"]], dict(d.get("extras", {})))


def compute_metrics(y_true, y_pred) -> Metrics:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    tp = int(np.sum((y_true == POSITIVE) & (y_pred == POSITIVE)))
    fn = int(np.sum((y_true == POSITIVE) & (y_pred != POSITIVE)))
    fp = int(np.sum((y_true != POSITIVE) & (y_pred == POSITIVE)))
    tn = int(np.sum((y_true != POSITIVE) & (y_pred != POSITIVE)))
    total = tp + fn + fp + tn
    prec_pos = tp / (tp + fp) if tp + fp else 0.0
    prec_neg = tn / (tn + fn) if tn + fn else 0.0
    return Metrics(
        accuracy=(tp + tn) / total if total else 0.0,
        precision_positive=prec_pos,
        precision_negative=prec_neg,
        precision_macro=0.5 * (prec_pos + prec_neg),
        confusion=[[tp, fn], [fp, tn]],
    )


def fold_indices(data: Dataset, k: int, seed: int) -> np.ndarray:
    return stratified_fold_indices(data.y.tolist(), k, seed)


def cross_validate(data: Dataset, algorithm: str, hyper: HyperParams | None = None, k: int = 10,
                   seed: int = 0, weights: np.ndarray | None = None) -> Metrics:
    """Pool held-out predictions of ``k`` stratified folds into one confusion matrix.

    Standardization is fit on each training part only; ``weights`` (all ones
    when omitted) multiply the standardized features.
    """
    folds = fold_indices(data, k, seed)
    pred = np.empty(len(data), dtype=np.int64)
    for f in range(k):
        test = np.flatnonzero(folds == f)
        if len(test) == 0:
            continue
        model = train(algorithm, data.subset(np.flatnonzero(folds != f)), hyper, seed=seed + f,
                      weights=weights)
        pred[test] = model.predict_many(data.X[test])
    return compute_metrics(data.y, pred)


def resubstitution_accuracy(data: Dataset, algorithm: str, hyper: HyperParams | None = None,
                            seed: int = 0, weights: np.ndarray | None = None) -> float:
    """Train and score on the same rows."""
    model = train(algorithm, data, hyper, seed=seed, weights=weights)
    return float(np.mean(model.predict_many(data.X) == data.y))
