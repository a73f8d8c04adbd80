"""The four classification algorithms with a shared fit/predict contract.

All models are immutable after fit, deterministic given their seeds, and
total on correctly-dimensioned prediction inputs.
"""

from .bayes import BayesModel, nb_fit, nb_log_scores, nb_predict, nb_predict_many, nb_predict_proba
from .forest import ForestModel, TreeNode, rf_fit, rf_predict, rf_predict_many, rf_predict_proba
from .knn import EUCLIDEAN, MANHATTAN, KnnModel, knn_fit, knn_predict, knn_predict_many
from .serialize import (
    BAYES_TAG,
    FOREST_TAG,
    KNN_TAG,
    SVM_TAG,
    model_from_dict,
    model_from_json,
    model_to_dict,
    model_to_json,
)
from .svm import (
    SvmModel,
    dual_objective,
    primal_objective,
    svm_decision,
    svm_fit,
    svm_predict,
)

__all__ = [
    "BayesModel",
    "ForestModel",
    "KnnModel",
    "SvmModel",
    "TreeNode",
    "EUCLIDEAN",
    "MANHATTAN",
    "KNN_TAG",
    "SVM_TAG",
    "FOREST_TAG",
    "BAYES_TAG",
    "dual_objective",
    "knn_fit",
    "knn_predict",
    "knn_predict_many",
    "model_from_dict",
    "model_from_json",
    "model_to_dict",
    "model_to_json",
    "nb_fit",
    "nb_log_scores",
    "nb_predict",
    "nb_predict_many",
    "nb_predict_proba",
    "primal_objective",
    "rf_fit",
    "rf_predict",
    "rf_predict_many",
    "rf_predict_proba",
    "svm_decision",
    "svm_fit",
    "svm_predict",
]
