"""Linear soft-margin SVM trained by sequential minimal optimization.

Solves the linear-kernel dual

    min  0.5 a'Qa - sum(a)   s.t.  y'a = 0,  0 <= a_i <= C,

with Q_ij = y_i y_j (x_i . x_j), by pairwise coordinate descent on the
maximal-KKT-violating pair. Termination: the KKT violation m - M drops
to ``tol`` or the pair-update budget ``max_passes`` is exhausted. The
primal weights are recovered as w = sum(a_i y_i x_i); the corresponding
primal objective is 0.5*||w||^2 + C*sum(hinge slack).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..data_model import EncodedMatrix, LabelVector

_TAU = 1e-12  # curvature floor for degenerate pair directions
_BOUND_SNAP = 1e-12  # snap-to-bound fraction of C


ArrayLike = Union[EncodedMatrix, np.ndarray]
LabelsLike = Union[LabelVector, np.ndarray]


@dataclass(frozen=True, eq=False)
class SvmModel:
    """Solved linear soft-margin classifier; immutable after fit."""

    w: np.ndarray
    b: float
    C: float
    alpha: np.ndarray
    converged: bool
    kkt_violation: float
    n_iter: int

    @property
    def margin(self) -> float:
        """Separation 2/||w|| between the supporting hyperplanes."""
        norm = float(np.linalg.norm(self.w))
        return 2.0 / norm if norm > 0.0 else float("inf")

    @property
    def n_features(self) -> int:
        return self.w.shape[0]


def _as_matrix(X: ArrayLike) -> np.ndarray:
    if isinstance(X, EncodedMatrix):
        return X.values
    return np.asarray(X, dtype=np.float64)


def _as_labels(y: LabelsLike) -> np.ndarray:
    if isinstance(y, LabelVector):
        return y.labels.astype(np.float64)
    return np.asarray(y, dtype=np.float64)


def svm_fit(
    X: ArrayLike,
    y: LabelsLike,
    C: float = 10.0,
    tol: float = 1e-3,
    max_passes: Optional[int] = None,
) -> SvmModel:
    """Train on (+1/-1)-labeled rows.

    Args:
        C: Slack penalty; must be positive.
        tol: KKT-violation threshold at which the dual is declared solved.
        max_passes: Pair-update budget; defaults to 10 * n_rows.

    Raises:
        ValueError: Non-positive C, fewer than 2 rows, single-class labels,
            or mismatched lengths.
    """
    Xv = _as_matrix(X)
    yv = _as_labels(y)
    n = Xv.shape[0]
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if n < 2:
        raise ValueError("need at least 2 training rows")
    if yv.shape[0] != n:
        raise ValueError(f"{n} rows but {yv.shape[0]} labels")
    if not (np.any(yv > 0) and np.any(yv < 0)):
        raise ValueError("training labels are single-class")
    if max_passes is None:
        max_passes = 10 * n

    K = Xv @ Xv.T
    diag = np.diagonal(K).copy()
    alpha = np.zeros(n)
    G = -np.ones(n)  # gradient of the dual objective at alpha = 0
    pos = yv > 0
    neg = ~pos
    snap = _BOUND_SNAP * C

    n_iter = 0
    while n_iter < max_passes:
        m, M, i, j = _violating_pair(alpha, G, yv, pos, neg, C, K, diag)
        if m - M <= tol:
            break
        # exact 2-variable step along the pair direction, capped by the box
        mj = -yv[j] * G[j]
        quad = max(diag[i] + diag[j] - 2.0 * K[i, j], _TAU)
        lam = (m - mj) / quad
        cap_i = (C if yv[i] > 0 else 0.0) - yv[i] * alpha[i]
        cap_j = yv[j] * alpha[j] - (0.0 if yv[j] > 0 else -C)
        lam = min(lam, cap_i, cap_j)
        if lam <= 0.0:
            break  # numerically stalled; violation reported below
        alpha[i] += yv[i] * lam
        alpha[j] -= yv[j] * lam
        for k in (i, j):
            if alpha[k] < snap:
                alpha[k] = 0.0
            elif alpha[k] > C - snap:
                alpha[k] = C
        G += lam * yv * (K[:, i] - K[:, j])
        n_iter += 1

    m, M, _, _ = _violating_pair(alpha, G, yv, pos, neg, C, K, diag)
    violation = max(m - M, 0.0)
    w = Xv.T @ (alpha * yv)
    b = _recover_bias(m, M, Xv, yv, w, C)
    return SvmModel(
        w=w,
        b=b,
        C=float(C),
        alpha=alpha,
        converged=violation <= tol,
        kkt_violation=float(violation),
        n_iter=n_iter,
    )


def _violating_pair(alpha, G, yv, pos, neg, C, K, diag):
    """Second-order working-set selection.

    i maximizes the KKT violation over I_up; j maximizes the guaranteed
    objective decrease (violation^2 / pair curvature) over the I_low
    indices that violate against i. Returns (m, M, i, j) where m - M is
    the stopping-criterion violation.
    """
    minus_yG = -yv * G
    up = (pos & (alpha < C)) | (neg & (alpha > 0.0))
    low = (pos & (alpha > 0.0)) | (neg & (alpha < C))
    up_vals = np.where(up, minus_yG, -np.inf)
    low_vals = np.where(low, minus_yG, np.inf)
    i = int(np.argmax(up_vals))
    m = up_vals[i]
    M = float(np.min(low_vals))
    if not np.isfinite(m) or not np.isfinite(M) or m - M <= 0.0:
        return m, M, i, int(np.argmin(low_vals))
    diff = m - low_vals  # violation of each candidate j against i
    quad = np.maximum(diag[i] + diag - 2.0 * K[i], _TAU)
    gain = np.where(low & (diff > 0.0), diff * diff / quad, -np.inf)
    j = int(np.argmax(gain))
    return m, M, i, j


def _recover_bias(m: float, M: float, Xv, yv, w, C: float) -> float:
    if np.isfinite(m) and np.isfinite(M):
        return float((m + M) / 2.0)
    # Degenerate index sets: pick the bias minimizing the primal directly.
    # The primal is piecewise linear in b, so some breakpoint is optimal.
    scores = Xv @ w
    candidates = yv - scores
    best_b, best_obj = 0.0, np.inf
    for b in candidates:
        obj = C * float(np.maximum(0.0, 1.0 - yv * (scores + b)).sum())
        if obj < best_obj:
            best_obj, best_b = obj, float(b)
    return best_b


def primal_objective(model: SvmModel, X: ArrayLike, y: LabelsLike) -> float:
    """0.5*||w||^2 + C * sum of hinge slacks on the given data."""
    Xv = _as_matrix(X)
    yv = _as_labels(y)
    slack = np.maximum(0.0, 1.0 - yv * (Xv @ model.w + model.b))
    return 0.5 * float(model.w @ model.w) + model.C * float(slack.sum())


def dual_objective(model: SvmModel, X: ArrayLike, y: LabelsLike) -> float:
    """sum(a) - 0.5 * ||sum(a_i y_i x_i)||^2 for the stored coefficients."""
    Xv = _as_matrix(X)
    yv = _as_labels(y)
    v = Xv.T @ (model.alpha * yv)
    return float(model.alpha.sum()) - 0.5 * float(v @ v)


def svm_decision(model: SvmModel, x: np.ndarray) -> Union[float, np.ndarray]:
    """w.x + b; accepts one point (1-D) or a batch (2-D)."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape[-1] != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {xv.shape[-1]}")
    out = xv @ model.w + model.b
    return float(out) if xv.ndim == 1 else out


def svm_predict(model: SvmModel, x: np.ndarray) -> Union[int, np.ndarray]:
    """+1 where the decision value is >= 0 (boundary is positive), else -1."""
    d = svm_decision(model, x)
    if isinstance(d, float):
        return 1 if d >= 0.0 else -1
    return np.where(d >= 0.0, 1, -1)
