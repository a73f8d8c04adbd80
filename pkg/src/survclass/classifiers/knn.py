"""k-nearest-neighbors classifier (lazy learner).

k must be odd so majority votes cannot tie; distance ties are broken by
the lower training-row index, which makes predictions deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..data_model import EncodedMatrix, LabelVector
from .svm import _as_labels, _as_matrix

EUCLIDEAN = "euclidean"
MANHATTAN = "manhattan"
METRICS = (EUCLIDEAN, MANHATTAN)


@dataclass(frozen=True, eq=False)
class KnnModel:
    """Stored training data plus the vote size and distance metric."""

    X: np.ndarray
    y: np.ndarray
    k: int
    metric: str


def knn_fit(
    X: Union[EncodedMatrix, np.ndarray],
    y: Union[LabelVector, np.ndarray],
    k: int = 5,
    metric: str = EUCLIDEAN,
) -> KnnModel:
    """Store the training data verbatim after validating the contract.

    Raises:
        ValueError: Even k, k outside [1, n], single-class labels, or an
            unknown metric.
    """
    Xv = _as_matrix(X)
    yv = _as_labels(y).astype(np.int64)
    n = Xv.shape[0]
    if k % 2 == 0:
        raise ValueError(f"k must be odd, got {k}")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if yv.shape[0] != n:
        raise ValueError(f"{n} rows but {yv.shape[0]} labels")
    if not (np.any(yv > 0) and np.any(yv < 0)):
        raise ValueError("training labels are single-class")
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    return KnnModel(X=Xv, y=yv, k=k, metric=metric)


def _distances(model: KnnModel, x: np.ndarray) -> np.ndarray:
    diff = model.X - x
    if model.metric == MANHATTAN:
        return np.abs(diff).sum(axis=1)
    return np.sqrt((diff * diff).sum(axis=1))


def knn_predict(model: KnnModel, x: np.ndarray) -> int:
    """Majority label among the k nearest training rows."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.ndim != 1 or xv.shape[0] != model.X.shape[1]:
        raise ValueError(f"expected a length-{model.X.shape[1]} point")
    dist = _distances(model, xv)
    # stable sort keeps equal distances in index order (lower index wins)
    nearest = np.argsort(dist, kind="stable")[: model.k]
    vote = int(model.y[nearest].sum())
    return 1 if vote > 0 else -1


def knn_predict_many(model: KnnModel, X: np.ndarray) -> np.ndarray:
    """Row-wise knn_predict; identical arithmetic to the single-point path."""
    Xv = np.asarray(X, dtype=np.float64)
    return np.array([knn_predict(model, row) for row in Xv], dtype=np.int64)
