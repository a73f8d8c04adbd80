"""JSON-shaped serialization of trained models.

Every model renders to {"algorithm": tag, "params": {...}, "learned":
{...}} with plain lists for arrays, so reports can embed or reference
reproducible model dumps. ``model_from_dict`` inverts ``model_to_dict``
exactly (floats round-trip through JSON).
"""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from .bayes import BayesModel, GaussianStats, LevelStats
from .forest import ForestModel, TreeNode
from .knn import KnnModel
from .svm import SvmModel

Model = Union[KnnModel, SvmModel, ForestModel, BayesModel]

KNN_TAG = "knn"
SVM_TAG = "svm"
FOREST_TAG = "random_forest"
BAYES_TAG = "naive_bayes"


def model_to_dict(model: Model) -> dict:
    if isinstance(model, KnnModel):
        return {
            "algorithm": KNN_TAG,
            "params": {"k": model.k, "metric": model.metric},
            "learned": {"X": model.X.tolist(), "y": model.y.tolist()},
        }
    if isinstance(model, SvmModel):
        return {
            "algorithm": SVM_TAG,
            "params": {"C": model.C},
            "learned": {
                "w": model.w.tolist(),
                "b": model.b,
                "alpha": model.alpha.tolist(),
                "converged": model.converged,
                "kkt_violation": model.kkt_violation,
                "n_iter": model.n_iter,
            },
        }
    if isinstance(model, ForestModel):
        return {
            "algorithm": FOREST_TAG,
            "params": {
                "n_trees": model.n_trees,
                "max_depth": model.max_depth,
                "features_per_split": model.features_per_split,
                "min_split": model.min_split,
                "bootstrap": model.bootstrap,
                "seed": model.seed,
                "n_features": model.n_features,
            },
            "learned": {"trees": [_tree_to_dict(t) for t in model.trees]},
        }
    if isinstance(model, BayesModel):
        return {
            "algorithm": BAYES_TAG,
            "params": {
                "laplace_alpha": model.laplace_alpha,
                "variance_floor": model.variance_floor,
                "n_features": model.n_features,
            },
            "learned": {
                "priors": list(model.priors),
                "gaussians": [
                    {"column": g.column, "mean": list(g.mean), "var": list(g.var)}
                    for g in model.gaussians
                ],
                "groups": [
                    {
                        "columns": list(grp.columns),
                        "levels": list(grp.levels),
                        "prob": [list(p) for p in grp.prob],
                    }
                    for grp in model.groups
                ],
            },
        }
    raise TypeError(f"not a trained model: {type(model).__name__}")


def _tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"n_pos": node.n_pos, "n_neg": node.n_neg}
    return {
        "n_pos": node.n_pos,
        "n_neg": node.n_neg,
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(d: dict) -> TreeNode:
    if "feature" not in d:
        return TreeNode(n_pos=d["n_pos"], n_neg=d["n_neg"])
    return TreeNode(
        n_pos=d["n_pos"],
        n_neg=d["n_neg"],
        feature=d["feature"],
        threshold=d["threshold"],
        left=_tree_from_dict(d["left"]),
        right=_tree_from_dict(d["right"]),
    )


def model_from_dict(d: dict) -> Model:
    tag = d.get("algorithm")
    params, learned = d["params"], d["learned"]
    if tag == KNN_TAG:
        return KnnModel(
            X=np.asarray(learned["X"], dtype=np.float64),
            y=np.asarray(learned["y"], dtype=np.int64),
            k=params["k"],
            metric=params["metric"],
        )
    if tag == SVM_TAG:
        return SvmModel(
            w=np.asarray(learned["w"], dtype=np.float64),
            b=learned["b"],
            C=params["C"],
            alpha=np.asarray(learned["alpha"], dtype=np.float64),
            converged=learned["converged"],
            kkt_violation=learned["kkt_violation"],
            n_iter=learned["n_iter"],
        )
    if tag == FOREST_TAG:
        return ForestModel(
            trees=tuple(_tree_from_dict(t) for t in learned["trees"]),
            n_trees=params["n_trees"],
            max_depth=params["max_depth"],
            features_per_split=params["features_per_split"],
            min_split=params["min_split"],
            bootstrap=params["bootstrap"],
            seed=params["seed"],
            n_features=params["n_features"],
        )
    if tag == BAYES_TAG:
        return BayesModel(
            priors=tuple(learned["priors"]),
            gaussians=tuple(
                GaussianStats(column=g["column"], mean=tuple(g["mean"]), var=tuple(g["var"]))
                for g in learned["gaussians"]
            ),
            groups=tuple(
                LevelStats(
                    columns=tuple(grp["columns"]),
                    levels=tuple(grp["levels"]),
                    prob=tuple(tuple(p) for p in grp["prob"]),
                )
                for grp in learned["groups"]
            ),
            laplace_alpha=params["laplace_alpha"],
            variance_floor=params["variance_floor"],
            n_features=params["n_features"],
        )
    raise ValueError(f"unknown algorithm tag: {tag!r}")


def model_to_json(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def model_from_json(text: str) -> Model:
    return model_from_dict(json.loads(text))
