"""Random forest of Gini-impurity decision trees with bootstrap sampling.

Determinism contract: every tree draws from its own PCG64 stream seeded
with (seed, tree_index); within a tree the stream is consumed in a fixed
order (bootstrap first, then one feature draw per node in depth-first
construction order), so identical seeds rebuild identical forests
node-for-node, and training may be parallelized across trees without
changing the result.

Split search: candidate thresholds are midpoints between consecutive
sorted unique values of a sampled feature; the split maximizing the
Gini-impurity decrease wins, ties resolved toward the lower column
index, then the lower threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..data_model import EncodedMatrix, LabelVector
from .svm import _as_labels, _as_matrix


@dataclass(frozen=True)
class TreeNode:
    """Split node (feature/threshold/children) or leaf (feature is None)."""

    n_pos: int
    n_neg: int
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    @property
    def positive_fraction(self) -> float:
        return self.n_pos / (self.n_pos + self.n_neg)


@dataclass(frozen=True, eq=False)
class ForestModel:
    trees: tuple[TreeNode, ...]
    n_trees: int
    max_depth: Optional[int]
    features_per_split: int
    min_split: int
    bootstrap: bool
    seed: int
    n_features: int


def rf_fit(
    X: Union[EncodedMatrix, np.ndarray],
    y: Union[LabelVector, np.ndarray],
    n_trees: int = 100,
    max_depth: Optional[int] = None,
    features_per_split: Optional[int] = None,
    min_split: int = 2,
    seed: int = 0,
    bootstrap: bool = True,
) -> ForestModel:
    """Grow ``n_trees`` trees on bootstrap samples of the training data.

    ``features_per_split`` defaults to ceil(sqrt(d)). ``bootstrap=False``
    trains every tree on the full sample (useful for the memorization
    check: a single unbounded tree reaches training accuracy 1.0 when
    all feature vectors are distinct).
    """
    Xv = _as_matrix(X)
    yv = _as_labels(y).astype(np.int64)
    n, d = Xv.shape
    if yv.shape[0] != n:
        raise ValueError(f"{n} rows but {yv.shape[0]} labels")
    if not (np.any(yv > 0) and np.any(yv < 0)):
        raise ValueError("training labels are single-class")
    if n_trees < 1:
        raise ValueError("need at least one tree")
    mtry = features_per_split if features_per_split is not None else math.ceil(math.sqrt(d))
    mtry = min(mtry, d)
    ypos = (yv > 0).astype(np.int64)

    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng([seed, t])
        idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        trees.append(_grow_tree(Xv, ypos, idx, rng, mtry, max_depth, min_split))
    return ForestModel(
        trees=tuple(trees),
        n_trees=n_trees,
        max_depth=max_depth,
        features_per_split=mtry,
        min_split=min_split,
        bootstrap=bootstrap,
        seed=seed,
        n_features=d,
    )


class _Shell:
    """Mutable node used only during construction; frozen afterwards."""

    __slots__ = ("n_pos", "n_neg", "feature", "threshold", "left", "right")

    def __init__(self):
        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None


def _grow_tree(Xv, ypos, idx, rng, mtry, max_depth, min_split) -> TreeNode:
    # Explicit stacks keep unbounded-depth trees clear of the Python
    # recursion limit. Feature draws happen in depth-first, left-first
    # node order, which pins the RNG stream consumption.
    d = Xv.shape[1]
    root = _Shell()
    todo: list[tuple[_Shell, np.ndarray, int]] = [(root, idx, 0)]
    while todo:
        shell, members, depth = todo.pop()
        n_pos = int(ypos[members].sum())
        n_neg = members.size - n_pos
        shell.n_pos, shell.n_neg = n_pos, n_neg
        if (
            n_pos == 0
            or n_neg == 0
            or members.size < min_split
            or (max_depth is not None and depth >= max_depth)
        ):
            continue
        feats = np.sort(rng.choice(d, size=mtry, replace=False))
        split = _best_split(Xv, ypos, members, feats, n_pos)
        if split is None:
            continue
        shell.feature, shell.threshold = split
        go_left = Xv[members, shell.feature] < shell.threshold
        shell.left, shell.right = _Shell(), _Shell()
        # push right first so the left child is processed first
        todo.append((shell.right, members[~go_left], depth + 1))
        todo.append((shell.left, members[go_left], depth + 1))
    return _freeze(root)


def _freeze(root: _Shell) -> TreeNode:
    frozen: dict[int, TreeNode] = {}
    stack = [root]
    while stack:
        s = stack[-1]
        if s.feature is None:
            frozen[id(s)] = TreeNode(n_pos=s.n_pos, n_neg=s.n_neg)
            stack.pop()
        elif id(s.left) in frozen and id(s.right) in frozen:
            frozen[id(s)] = TreeNode(
                n_pos=s.n_pos, n_neg=s.n_neg, feature=s.feature, threshold=s.threshold,
                left=frozen[id(s.left)], right=frozen[id(s.right)],
            )
            stack.pop()
        else:
            stack.append(s.right)
            stack.append(s.left)
    return frozen[id(root)]


def _best_split(Xv, ypos, members, feats, n_pos) -> Optional[tuple[int, float]]:
    """Highest Gini-decrease split over the sampled features, or None.

    Gain comparisons are strict, and features (ascending index) and
    thresholds (ascending value) are scanned in order, so the first
    maximum encountered realizes the tie rule.
    """
    m = members.size
    parent_gini = _gini(n_pos, m - n_pos)
    best_gain = 0.0
    best: Optional[tuple[int, float]] = None
    for f in feats:
        v = Xv[members, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        ps = ypos[members][order]
        boundary = vs[:-1] < vs[1:]
        if not boundary.any():
            continue
        mid = vs[:-1] + (vs[1:] - vs[:-1]) / 2.0
        # guard against midpoints rounding onto a neighbor value
        valid = boundary & (mid > vs[:-1]) & (mid <= vs[1:])
        if not valid.any():
            continue
        cum_pos = np.cumsum(ps)[:-1]
        left_n = np.arange(1, m)
        right_n = m - left_n
        left_pos = cum_pos
        right_pos = n_pos - left_pos
        left_gini = _gini_vec(left_pos, left_n)
        right_gini = _gini_vec(right_pos, right_n)
        gains = parent_gini - (left_n * left_gini + right_n * right_gini) / m
        gains = np.where(valid, gains, -np.inf)
        pos = int(np.argmax(gains))  # first max = lowest threshold
        if gains[pos] > best_gain:
            best_gain = float(gains[pos])
            best = (int(f), float(mid[pos]))
    return best


def _gini(n_pos: int, n_neg: int) -> float:
    total = n_pos + n_neg
    if total == 0:
        return 0.0
    p = n_pos / total
    q = n_neg / total
    return 1.0 - p * p - q * q


def _gini_vec(n_pos: np.ndarray, total: np.ndarray) -> np.ndarray:
    p = n_pos / total
    q = 1.0 - p
    return 1.0 - p * p - q * q


def _walk(tree: TreeNode, x: np.ndarray) -> TreeNode:
    node = tree
    while not node.is_leaf:
        node = node.left if x[node.feature] < node.threshold else node.right
    return node


def rf_predict_proba(model: ForestModel, x: np.ndarray) -> float:
    """Posterior P(y = +1 | x): mean over trees of the leaf +1 frequency."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.ndim != 1 or xv.shape[0] != model.n_features:
        raise ValueError(f"expected a length-{model.n_features} point")
    fractions = np.array([_walk(t, xv).positive_fraction for t in model.trees])
    return float(np.mean(fractions))


def rf_predict(model: ForestModel, x: np.ndarray) -> int:
    """Maximum-posterior label; the 0.5 tie goes to +1."""
    return 1 if rf_predict_proba(model, x) >= 0.5 else -1


def rf_predict_many(model: ForestModel, X: np.ndarray) -> np.ndarray:
    Xv = np.asarray(X, dtype=np.float64)
    return np.array([rf_predict(model, row) for row in Xv], dtype=np.int64)
