"""Naive Bayes over mixed numeric/one-hot design matrices.

Numeric columns get per-class Gaussians (population variance, floored);
each categorical one-hot group gets per-class level probabilities with
Laplace smoothing, so unseen levels keep positive mass. Source variables
are treated as conditionally independent given the class. Posteriors are
computed in log space and normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..data_model import ColumnMeta, EncodedMatrix, LabelVector
from .svm import _as_labels, _as_matrix

POS, NEG = 0, 1  # class slots in per-class arrays: [+1, -1]


@dataclass(frozen=True, eq=False)
class GaussianStats:
    """Per-class Gaussian for one numeric column."""

    column: int
    mean: tuple[float, float]  # (+1, -1)
    var: tuple[float, float]


@dataclass(frozen=True, eq=False)
class LevelStats:
    """Per-class smoothed level probabilities for one one-hot group."""

    columns: tuple[int, ...]
    levels: tuple[str, ...]
    prob: tuple[tuple[float, ...], tuple[float, ...]]  # [class][level]


@dataclass(frozen=True, eq=False)
class BayesModel:
    priors: tuple[float, float]  # (+1, -1), sum to 1
    gaussians: tuple[GaussianStats, ...]
    groups: tuple[LevelStats, ...]
    laplace_alpha: float
    variance_floor: float
    n_features: int


def _column_groups(column_meta: Sequence[ColumnMeta]):
    """Split columns into numeric singles and contiguous one-hot groups."""
    numeric: list[int] = []
    groups: list[tuple[str, list[int], list[str]]] = []
    for j, meta in enumerate(column_meta):
        if meta.level is None:
            numeric.append(j)
        elif groups and groups[-1][0] == meta.source:
            groups[-1][1].append(j)
            groups[-1][2].append(meta.level)
        else:
            groups.append((meta.source, [j], [meta.level]))
    return numeric, groups


def nb_fit(
    X: Union[EncodedMatrix, np.ndarray],
    y: Union[LabelVector, np.ndarray],
    column_meta: Optional[Sequence[ColumnMeta]] = None,
    laplace_alpha: float = 1.0,
    variance_floor: float = 1e-9,
) -> BayesModel:
    """Estimate priors and class-conditional distributions.

    ``column_meta`` defaults to the matrix's own metadata (all-numeric
    when fitting a plain array).

    Raises:
        ValueError: Single-class labels, non-positive smoothing or floor.
    """
    Xv = _as_matrix(X)
    yv = _as_labels(y).astype(np.int64)
    if column_meta is None:
        if isinstance(X, EncodedMatrix):
            column_meta = X.column_meta
        else:
            column_meta = [ColumnMeta(source=f"c{j}") for j in range(Xv.shape[1])]
    if laplace_alpha <= 0:
        raise ValueError(f"laplace_alpha must be positive, got {laplace_alpha}")
    if variance_floor <= 0:
        raise ValueError(f"variance_floor must be positive, got {variance_floor}")
    if yv.shape[0] != Xv.shape[0]:
        raise ValueError(f"{Xv.shape[0]} rows but {yv.shape[0]} labels")
    masks = (yv == 1, yv == -1)
    counts = (int(masks[POS].sum()), int(masks[NEG].sum()))
    if counts[POS] == 0 or counts[NEG] == 0:
        raise ValueError("training labels are single-class")
    n = Xv.shape[0]
    priors = (counts[POS] / n, counts[NEG] / n)

    numeric_cols, raw_groups = _column_groups(column_meta)
    gaussians = []
    for j in numeric_cols:
        means, variances = [], []
        for cls in (POS, NEG):
            v = Xv[masks[cls], j]
            mu = float(v.mean())
            var = float(np.mean((v - mu) ** 2))
            means.append(mu)
            variances.append(max(var, variance_floor))
        gaussians.append(GaussianStats(column=j, mean=tuple(means), var=tuple(variances)))

    groups = []
    for source, cols, levels in raw_groups:
        L = len(cols)
        probs = []
        for cls in (POS, NEG):
            sub = Xv[masks[cls]][:, cols]
            seen = sub.sum(axis=0)  # one-hot rows: column sums are level counts
            probs.append(tuple((float(c) + laplace_alpha) / (counts[cls] + laplace_alpha * L) for c in seen))
        groups.append(LevelStats(columns=tuple(cols), levels=tuple(levels), prob=tuple(probs)))

    return BayesModel(
        priors=priors,
        gaussians=tuple(gaussians),
        groups=tuple(groups),
        laplace_alpha=laplace_alpha,
        variance_floor=variance_floor,
        n_features=Xv.shape[1],
    )


_LOG_2PI = math.log(2.0 * math.pi)


def nb_log_scores(model: BayesModel, x: np.ndarray) -> tuple[float, float]:
    """Unnormalized log posterior scores (log prior + log likelihood)."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.ndim != 1 or xv.shape[0] != model.n_features:
        raise ValueError(f"expected a length-{model.n_features} point")
    scores = [math.log(model.priors[POS]), math.log(model.priors[NEG])]
    for g in model.gaussians:
        v = xv[g.column]
        for cls in (POS, NEG):
            scores[cls] += -0.5 * (_LOG_2PI + math.log(g.var[cls])) - (v - g.mean[cls]) ** 2 / (
                2.0 * g.var[cls]
            )
    for grp in model.groups:
        # the indicator set to 1 names the level; argmax tolerates junk input
        level_idx = int(np.argmax(xv[list(grp.columns)]))
        for cls in (POS, NEG):
            scores[cls] += math.log(grp.prob[cls][level_idx])
    return scores[POS], scores[NEG]


def nb_predict_proba(model: BayesModel, x: np.ndarray) -> float:
    """Normalized posterior P(y = +1 | x)."""
    lp, ln = nb_log_scores(model, x)
    total = np.logaddexp(lp, ln)
    return float(np.exp(lp - total))


def nb_predict(model: BayesModel, x: np.ndarray) -> int:
    """+1 iff P(+1|x) >= P(-1|x); the exact tie goes to +1."""
    lp, ln = nb_log_scores(model, x)
    return 1 if lp >= ln else -1


def nb_predict_many(model: BayesModel, X: np.ndarray) -> np.ndarray:
    Xv = np.asarray(X, dtype=np.float64)
    return np.array([nb_predict(model, row) for row in Xv], dtype=np.int64)
