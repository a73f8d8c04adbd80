"""Splitting, scoring, and the algorithm-comparison harness.

Comparison reports list one entry per requested algorithm in the fixed
order KNN, random forest, SVM, naive Bayes. A fit failure (for example a
single-class fold) is recorded on that algorithm's entry without
aborting the others. Identical (data, config, seed) produce identical
reports.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .classifiers import (
    knn_fit,
    knn_predict_many,
    nb_fit,
    nb_predict_many,
    rf_fit,
    rf_predict_many,
    svm_fit,
    svm_predict,
)
from .data_model import EncodedMatrix, LabelVector
from .ingest import ReductionLedger

KNN = "knn"
RANDOM_FOREST = "random_forest"
SVM = "svm"
NAIVE_BAYES = "naive_bayes"
# Fixed report order for the comparison tables.
ALGORITHM_ORDER = (KNN, RANDOM_FOREST, SVM, NAIVE_BAYES)


@dataclass(frozen=True)
class KnnParams:
    k: int = 5
    metric: str = "euclidean"


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: Optional[int] = None
    features_per_split: Optional[int] = None
    min_split: int = 2
    bootstrap: bool = True


@dataclass(frozen=True)
class SvmParams:
    C: float = 10.0
    tol: float = 1e-3
    max_passes: Optional[int] = None


@dataclass(frozen=True)
class BayesParams:
    laplace_alpha: float = 1.0
    variance_floor: float = 1e-9


AlgoParams = Union[KnnParams, ForestParams, SvmParams, BayesParams]

DEFAULT_PARAMS: dict[str, AlgoParams] = {
    KNN: KnnParams(),
    RANDOM_FOREST: ForestParams(),
    SVM: SvmParams(),
    NAIVE_BAYES: BayesParams(),
}


@dataclass(frozen=True)
class Holdout:
    test_fraction: float = 0.25


@dataclass(frozen=True)
class KFold:
    folds: int = 5


SplitSpec = Union[Holdout, KFold]


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def add(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn,
        )


@dataclass(frozen=True)
class AlgorithmResult:
    """One comparison row: scores, or the error that prevented them."""

    name: str
    params: dict
    accuracy: Optional[float]
    confusion: Optional[ConfusionMatrix]
    seed: int
    error: Optional[str] = None


@dataclass(frozen=True)
class ComparisonReport:
    task: str
    entries: tuple[AlgorithmResult, ...]
    split: dict
    seed: int
    ledger: Optional[ReductionLedger] = None
    selected_features: tuple[str, ...] = ()


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(
    labels: LabelVector, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded per-class holdout split; returns sorted (train, test) indices.

    Per-class test counts are round(class_count * test_fraction),
    half-up. Classes are shuffled independently (+1 first) from a PCG64
    stream, so identical seeds give identical splits.

    Raises:
        ValueError: Fraction outside (0, 1) or a class with <2 members.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test fraction must be in (0, 1), got {test_fraction}")
    y = labels.labels
    rng = np.random.default_rng(seed)
    train: list[np.ndarray] = []
    test: list[np.ndarray] = []
    for cls in (1, -1):
        idx = np.flatnonzero(y == cls)
        if idx.size < 2:
            raise ValueError(f"class {cls:+d} has {idx.size} members, too small to stratify")
        shuffled = rng.permutation(idx)
        t = _round_half_up(idx.size * test_fraction)
        test.append(shuffled[:t])
        train.append(shuffled[t:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def stratified_kfold(labels: LabelVector, k: int, seed: int) -> list[np.ndarray]:
    """Seeded stratified partition into k folds of sorted indices.

    Within each class the fold sizes differ by at most one.

    Raises:
        ValueError: k < 2 or a class with fewer than k members.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    y = labels.labels
    rng = np.random.default_rng(seed)
    folds: list[list[np.ndarray]] = [[] for _ in range(k)]
    for cls in (1, -1):
        idx = np.flatnonzero(y == cls)
        if idx.size < k:
            raise ValueError(f"class {cls:+d} has {idx.size} members, fewer than {k} folds")
        shuffled = rng.permutation(idx)
        for f in range(k):
            folds[f].append(shuffled[f::k])
    return [np.sort(np.concatenate(parts)) for parts in folds]


def accuracy(predicted: Sequence[int], truth: Sequence[int]) -> float:
    """Matches / total."""
    p = np.asarray(predicted)
    t = np.asarray(truth)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    if p.size == 0:
        raise ValueError("nothing to score")
    return float(np.mean(p == t))


def confusion(predicted: Sequence[int], truth: Sequence[int]) -> ConfusionMatrix:
    """Standard 2x2 counts with +1 as the positive class."""
    p = np.asarray(predicted)
    t = np.asarray(truth)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    return ConfusionMatrix(
        tp=int(np.sum((p == 1) & (t == 1))),
        fp=int(np.sum((p == 1) & (t == -1))),
        tn=int(np.sum((p == -1) & (t == -1))),
        fn=int(np.sum((p == -1) & (t == 1))),
    )


def _fit_predict(
    name: str, params: AlgoParams, X: EncodedMatrix, y: LabelVector, train: np.ndarray, test: np.ndarray, seed: int
) -> np.ndarray:
    Xtr = X.values[train]
    ytr = LabelVector(y.labels[train], positive_meaning=y.positive_meaning)
    Xte = X.values[test]
    if name == KNN:
        model = knn_fit(Xtr, ytr, k=params.k, metric=params.metric)
        return knn_predict_many(model, Xte)
    if name == RANDOM_FOREST:
        model = rf_fit(
            Xtr,
            ytr,
            n_trees=params.n_trees,
            max_depth=params.max_depth,
            features_per_split=params.features_per_split,
            min_split=params.min_split,
            seed=seed,
            bootstrap=params.bootstrap,
        )
        return rf_predict_many(model, Xte)
    if name == SVM:
        model = svm_fit(Xtr, ytr, C=params.C, tol=params.tol, max_passes=params.max_passes)
        return np.asarray(svm_predict(model, Xte))
    if name == NAIVE_BAYES:
        train_matrix = EncodedMatrix(Xtr, X.column_meta)
        model = nb_fit(
            train_matrix,
            ytr,
            laplace_alpha=params.laplace_alpha,
            variance_floor=params.variance_floor,
        )
        return nb_predict_many(model, Xte)
    raise ValueError(f"unknown algorithm: {name!r}")


def _params_dict(params: AlgoParams) -> dict:
    return asdict(params)


def compare_algorithms(
    X: EncodedMatrix,
    y: LabelVector,
    algorithms: dict[str, AlgoParams],
    split: SplitSpec,
    seed: int,
    task: str = "custom",
    ledger: Optional[ReductionLedger] = None,
    selected_features: Sequence[str] = (),
) -> ComparisonReport:
    """Train and score each requested algorithm on a shared split.

    Holdout splits score the test set once; k-fold scores every row
    exactly once and reports the mean fold accuracy with summed
    confusion counts. Fit errors are isolated per algorithm.
    """
    if not algorithms:
        raise ValueError("no algorithms requested")
    unknown = set(algorithms) - set(ALGORITHM_ORDER)
    if unknown:
        raise ValueError(f"unknown algorithms: {sorted(unknown)}")
    if X.n_rows != len(y):
        raise ValueError(f"{X.n_rows} rows but {len(y)} labels")

    if isinstance(split, Holdout):
        train, test = stratified_split(y, split.test_fraction, seed)
        plan = [(train, test)]
        split_desc = {
            "kind": "holdout",
            "test_fraction": split.test_fraction,
            "train_rows": int(train.size),
            "test_rows": int(test.size),
        }
    else:
        folds = stratified_kfold(y, split.folds, seed)
        all_idx = np.arange(X.n_rows)
        plan = [(np.setdiff1d(all_idx, fold), fold) for fold in folds]
        split_desc = {"kind": "kfold", "folds": split.folds, "rows": int(X.n_rows)}

    entries = []
    for name in ALGORITHM_ORDER:
        if name not in algorithms:
            continue
        params = algorithms[name]
        try:
            accs = []
            conf = ConfusionMatrix()
            for train, test in plan:
                pred = _fit_predict(name, params, X, y, train, test, seed)
                truth = y.labels[test]
                accs.append(accuracy(pred, truth))
                conf = conf.add(confusion(pred, truth))
            entries.append(
                AlgorithmResult(
                    name=name,
                    params=_params_dict(params),
                    accuracy=float(np.mean(accs)),
                    confusion=conf,
                    seed=seed,
                )
            )
        except (ValueError, RuntimeError) as e:
            entries.append(
                AlgorithmResult(
                    name=name,
                    params=_params_dict(params),
                    accuracy=None,
                    confusion=None,
                    seed=seed,
                    error=str(e),
                )
            )
    return ComparisonReport(
        task=task,
        entries=tuple(entries),
        split=split_desc,
        seed=seed,
        ledger=ledger,
        selected_features=tuple(selected_features),
    )
