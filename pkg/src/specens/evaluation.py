"""Clustering accuracy under the best one-to-one cluster-to-class relabeling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ContractError
from .tksc import PartitionalResult


@dataclass(frozen=True, eq=False)
class AccuracyReport:
    """Best-match accuracy, the cluster-to-class mapping, and the confusion matrix.

    ``mapping`` sends each predicted cluster to the ground-truth value it was
    matched with, or to None when there are more clusters than classes.
    """

    accuracy: float
    mapping: dict
    confusion: np.ndarray


def accuracy(pred: PartitionalResult, truth) -> AccuracyReport:
    """Fraction of instances on the matched confusion diagonal.

    The matching maximizes the total matched count over one-to-one
    cluster-to-class assignments (an exact assignment solve), so the result is
    invariant to relabeling either side.
    """
    y_pred = pred.assign
    y_true = np.asarray(truth)
    if y_true.shape != y_pred.shape:
        raise ContractError(f"got {y_true.shape} truth labels for {y_pred.shape} predictions")
    true_values, true_codes = np.unique(y_true, return_inverse=True)
    confusion = np.zeros((pred.n_clusters, true_values.size), dtype=int)
    np.add.at(confusion, (y_pred, true_codes), 1)
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    matched = int(confusion[rows, cols].sum())
    mapping = {c: None for c in range(pred.n_clusters)}
    for r, c in zip(rows, cols):
        mapping[int(r)] = true_values[c].item()
    return AccuracyReport(matched / y_true.size, mapping, confusion)
