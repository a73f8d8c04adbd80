"""Independent oracles the tests check the implementations against.

Each oracle takes a deliberately different route from the code under
test: the QP oracle solves the SVM dual with an interior-point solver,
the eigenvalue oracle works from the characteristic polynomial (exact
integer discriminant + closed-form roots), the KNN oracle is a plain
full sort, and the forest oracle walks serialized tree dicts.
"""

from __future__ import annotations

import math
from fractions import Fraction

import cvxopt
import numpy as np

cvxopt.solvers.options["show_progress"] = False


# --- soft-margin QP ---------------------------------------------------------


def qp_primal_oracle(X: np.ndarray, y: np.ndarray, C: float) -> float:
    """Optimal primal value 0.5*||w||^2 + C*sum(slack) via interior-point QP.

    Solves the dual exactly, recovers w, then minimizes the piecewise
    linear primal over the bias directly (some hinge breakpoint attains
    the minimum), so no KKT bias estimate is needed.
    """
    n = X.shape[0]
    yf = y.astype(float)
    Q = (X @ X.T) * np.outer(yf, yf) + 1e-10 * np.eye(n)
    sol = cvxopt.solvers.qp(
        cvxopt.matrix(Q),
        cvxopt.matrix(-np.ones(n)),
        cvxopt.matrix(np.vstack([-np.eye(n), np.eye(n)])),
        cvxopt.matrix(np.concatenate([np.zeros(n), C * np.ones(n)])),
        cvxopt.matrix(yf.reshape(1, -1)),
        cvxopt.matrix(np.zeros(1)),
    )
    alpha = np.array(sol["x"]).ravel()
    w = X.T @ (alpha * yf)
    scores = X @ w
    best = min(
        float(C * np.maximum(0.0, 1.0 - yf * (scores + b)).sum()) for b in (yf - scores)
    )
    return 0.5 * float(w @ w) + best


# --- symmetric eigenvalues from the characteristic polynomial ---------------


def eig2_charpoly(a: float, b: float, d: float) -> list[float]:
    """Roots of the 2x2 characteristic polynomial, ascending."""
    mid = (a + d) / 2.0
    rad = math.sqrt(((a - d) / 2.0) ** 2 + b * b)
    return [mid - rad, mid + rad]


def eig3_charpoly(a00: int, a01: int, a02: int, a11: int, a12: int, a22: int) -> list[float]:
    """Eigenvalues of an integer symmetric 3x3 matrix, ascending.

    Integer coefficients make the cubic discriminant exact: a zero
    discriminant means repeated roots, which are then rational and
    computed exactly; otherwise root separation is bounded away from
    zero and the trigonometric closed form is accurate.
    """
    tr = a00 + a11 + a22
    c1 = a00 * a11 - a01 * a01 + a00 * a22 - a02 * a02 + a11 * a22 - a12 * a12
    det = (
        a00 * (a11 * a22 - a12 * a12)
        - a01 * (a01 * a22 - a12 * a02)
        + a02 * (a01 * a12 - a11 * a02)
    )
    # monic cubic x^3 + b x^2 + c x + d
    b, c, d = -tr, c1, -det
    disc = 18 * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * c**3 - 27 * d * d
    if disc == 0:
        if b * b - 3 * c == 0:
            r = Fraction(-b, 3)
            roots = [r, r, r]
        else:
            r = Fraction(9 * d - b * c, 2 * (b * b - 3 * c))
            roots = sorted([r, r, -b - 2 * r])
        return [float(x) for x in roots]
    return _cubic_trig(float(b), float(c), float(d))


def _cubic_trig(b: float, c: float, d: float) -> list[float]:
    # depressed cubic t^3 + p t + r with x = t - b/3; all roots real here
    shift = -b / 3.0
    p = c - b * b / 3.0
    r = d + 2.0 * b**3 / 27.0 - b * c / 3.0
    if p >= 0.0:  # cannot happen for distinct all-real roots
        raise ValueError("cubic is not in the all-real distinct-root regime")
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = max(-1.0, min(1.0, 3.0 * r / (p * m)))
    phi = math.acos(arg) / 3.0
    return sorted(shift + m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3))


# --- naive KNN --------------------------------------------------------------


def knn_brute(X: np.ndarray, y: np.ndarray, k: int, metric: str, query: np.ndarray) -> int:
    """Full sort over all training rows; distance ties keep lower index."""
    dists = []
    for i, row in enumerate(X):
        if metric == "manhattan":
            d = float(np.abs(row - query).sum())
        else:
            d = float(np.sqrt(((row - query) ** 2).sum()))
        dists.append((d, i))
    dists.sort()  # ties resolved by the index component
    vote = sum(int(y[i]) for _, i in dists[:k])
    return 1 if vote > 0 else -1


# --- forest tree walk over serialized dicts ---------------------------------


def walk_tree_dict(node: dict, x: np.ndarray) -> float:
    """Leaf +1 frequency reached by x in a serialized tree."""
    while "feature" in node:
        node = node["left"] if x[node["feature"]] < node["threshold"] else node["right"]
    return node["n_pos"] / (node["n_pos"] + node["n_neg"])


def forest_proba_oracle(model_dict: dict, x: np.ndarray) -> float:
    fractions = np.array([walk_tree_dict(t, x) for t in model_dict["learned"]["trees"]])
    return float(np.mean(fractions))


# --- single-feature threshold accuracy (RFE informativeness) ----------------


def best_single_feature_accuracy(column: np.ndarray, labels: np.ndarray) -> float:
    """Best accuracy of any rule sign(+-(x - t)) over all thresholds."""
    values = np.sort(np.unique(column))
    candidates = [values[0] - 1.0]
    candidates.extend((values[:-1] + values[1:]) / 2.0)
    candidates.append(values[-1] + 1.0)
    best = 0.0
    for t in candidates:
        pred = np.where(column >= t, 1, -1)
        acc = float(np.mean(pred == labels))
        best = max(best, acc, 1.0 - acc)
    return best
