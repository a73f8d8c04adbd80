"""Three-stage dimensionality reduction: correlation filter, RFE, PCA.

The correlation filter greedily drops any column whose absolute Pearson
correlation with an earlier kept column exceeds the threshold, so the
lower-index (earlier schema) member of each correlated pair survives.

RFE repeatedly fits a linear SVM on the standardized remaining columns
and eliminates the column with the smallest absolute weight until all
columns are ranked.

PCA eigendecomposes the population covariance with a cyclic Jacobi
solver and orders components by explained variance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .classifiers.svm import svm_fit
from .data_model import EncodedMatrix, LabelVector
from .ingest import standardize_columns

MatrixLike = Union[EncodedMatrix, np.ndarray]


def _values(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, EncodedMatrix):
        return matrix.values
    return np.asarray(matrix, dtype=np.float64)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; 0.0 by convention when either input is constant.

    Raises:
        ValueError: Length mismatch or fewer than 2 observations.
    """
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValueError(f"length mismatch: {xv.shape} vs {yv.shape}")
    if xv.size < 2:
        raise ValueError("need at least 2 observations")
    a = xv - xv.mean()
    b = yv - yv.mean()
    denom = float(np.sqrt((a @ a) * (b @ b)))
    if denom == 0.0:
        return 0.0
    return float((a @ b) / denom)


def correlation_matrix(values: np.ndarray) -> np.ndarray:
    """All pairwise Pearson correlations; constant columns correlate 0 with everything."""
    centered = values - values.mean(axis=0)
    norms = np.sqrt((centered * centered).sum(axis=0))
    safe = np.where(norms == 0.0, 1.0, norms)
    corr = (centered.T @ centered) / np.outer(safe, safe)
    constant = norms == 0.0
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    return corr


def correlation_filter(
    matrix: MatrixLike, threshold: float = 0.75
) -> tuple[list[int], list[int]]:
    """Greedy scan in column order; returns (kept, removed) index lists.

    Column j is removed iff |pearson(col_j, col_i)| > threshold for some
    already-kept i < j, which keeps every earlier member of a correlated
    pair and makes the result idempotent.
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    values = _values(matrix)
    corr = np.abs(correlation_matrix(values))
    kept: list[int] = []
    removed: list[int] = []
    for j in range(values.shape[1]):
        if any(corr[j, i] > threshold for i in kept):
            removed.append(j)
        else:
            kept.append(j)
    return kept, removed


@dataclass(frozen=True)
class RankerConfig:
    """Linear-SVM settings used for RFE importance scoring.

    Ranking needs relative weight magnitudes only, so the defaults trade
    a little dual precision for speed compared to the classifier defaults.
    """

    C: float = 1.0
    tol: float = 1e-2
    max_passes: Optional[int] = None


@dataclass(frozen=True)
class FeatureRanking:
    """Elimination order, worst first; the last entry is the rank-1 survivor."""

    order: tuple[int, ...]
    scores_per_round: tuple[float, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order must be a permutation of column indices")

    def best(self, n_keep: int) -> list[int]:
        """The n_keep best-ranked column indices in original index order."""
        if not 1 <= n_keep <= len(self.order):
            raise ValueError(f"n_keep must be in [1, {len(self.order)}], got {n_keep}")
        return sorted(self.order[len(self.order) - n_keep :])


def rfe_rank(
    matrix: MatrixLike,
    labels: Union[LabelVector, np.ndarray],
    ranker: RankerConfig = RankerConfig(),
) -> FeatureRanking:
    """Rank all columns by recursive elimination.

    Each round fits the ranker on the standardized remaining columns and
    eliminates the single column with the lowest |weight| (ties go to
    the lowest original index), until one column remains.

    Raises:
        ValueError: Fewer than 2 columns; single-class labels propagate
            from the ranker fit.
    """
    values = _values(matrix)
    if values.shape[1] < 2:
        raise ValueError("need at least 2 columns to rank")
    remaining = list(range(values.shape[1]))
    order: list[int] = []
    scores: list[float] = []
    while len(remaining) > 1:
        sub = standardize_columns(values[:, remaining])
        model = svm_fit(sub, labels, C=ranker.C, tol=ranker.tol, max_passes=ranker.max_passes)
        importance = np.abs(model.w)
        worst = int(np.argmin(importance))  # first minimum = lowest index
        order.append(remaining[worst])
        scores.append(float(importance[worst]))
        del remaining[worst]
    order.append(remaining[0])
    return FeatureRanking(order=tuple(order), scores_per_round=tuple(scores))


def rfe_select(ranking: FeatureRanking, n_keep: int) -> list[int]:
    """Best n_keep columns of a completed ranking, in original index order."""
    return ranking.best(n_keep)


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps exhausted before the off-diagonal norm converged."""

    def __init__(self, sweeps: int, off_norm: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
        )


def jacobi_eigh(
    A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvectors in columns,
    unordered. Convergence: the off-diagonal Frobenius norm falls below
    ``tol`` scaled by max(1, ||A||_F), within ``max_sweeps`` sweeps.

    Raises:
        EigenConvergenceError: Reporting the sweep count on failure.
    """
    M = np.array(A, dtype=np.float64)
    d = M.shape[0]
    if M.shape != (d, d):
        raise ValueError(f"matrix must be square, got {M.shape}")
    if not np.allclose(M, M.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    M = (M + M.T) / 2.0  # scrub float asymmetry dust
    V = np.eye(d)
    if d < 2:
        return np.diagonal(M).copy(), V
    threshold = tol * max(1.0, float(np.linalg.norm(M)))

    def off_norm() -> float:
        off = M - np.diag(np.diagonal(M))
        return float(np.linalg.norm(off))

    sweeps = 0
    while off_norm() > threshold:
        if sweeps >= max_sweeps:
            raise EigenConvergenceError(sweeps, off_norm())
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = M[p, q]
                if apq == 0.0:
                    continue
                # stable small-magnitude rotation angle for the R M R^T
                # update with R = [[c, s], [-s, c]] on the (p, q) plane
                tau = (M[q, q] - M[p, p]) / (2.0 * apq)
                t = -np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                M[[p, q], :] = rot @ M[[p, q], :]
                M[:, [p, q]] = M[:, [p, q]] @ rot.T
                M[p, q] = M[q, p] = 0.0  # exact by construction of the angle
                V[:, [p, q]] = V[:, [p, q]] @ rot.T
        sweeps += 1
    return np.diagonal(M).copy(), V


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Full principal-component basis fitted on one matrix.

    Component rows are orthonormal; eigenvalues are sorted non-increasing
    and the explained-variance ratios over all components sum to 1.
    Sign convention: each component's largest-magnitude entry is positive.
    """

    mean: np.ndarray
    components: np.ndarray  # (k, d); rows are principal directions
    eigenvalues: np.ndarray
    explained_variance_ratio: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def n_features(self) -> int:
        return self.components.shape[1]


def pca_fit(matrix: MatrixLike) -> PcaModel:
    """Fit all principal components of the population covariance.

    Raises:
        ValueError: Fewer than 2 rows.
        EigenConvergenceError: Propagated from the Jacobi solver.
    """
    values = _values(matrix)
    n, d = values.shape
    if n < 2:
        raise ValueError(f"need at least 2 rows, got {n}")
    mean = values.mean(axis=0)
    centered = values - mean
    cov = (centered.T @ centered) / n
    eigenvalues, vectors = jacobi_eigh(cov)
    eigenvalues = np.where(np.abs(eigenvalues) < 1e-12, 0.0, eigenvalues)
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = np.maximum(eigenvalues[order], 0.0)
    components = vectors.T[order]
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    total = float(eigenvalues.sum())
    ratios = eigenvalues / total if total > 0 else np.zeros_like(eigenvalues)
    return PcaModel(
        mean=mean,
        components=components,
        eigenvalues=eigenvalues,
        explained_variance_ratio=ratios,
    )


def choose_components(model: PcaModel, variance_target: float = 0.95) -> int:
    """Smallest k whose cumulative explained-variance ratio reaches the target."""
    if not 0 < variance_target <= 1:
        raise ValueError(f"variance target must be in (0, 1], got {variance_target}")
    cumulative = np.cumsum(model.explained_variance_ratio)
    for k, c in enumerate(cumulative, start=1):
        if c >= variance_target:
            return k
    return model.n_components  # ratios may sum slightly below 1 in float


def pca_transform(model: PcaModel, matrix: MatrixLike, k: int) -> np.ndarray:
    """Project rows onto the first k components: (X - mean) @ components[:k].T."""
    values = _values(matrix)
    if not 1 <= k <= model.n_components:
        raise ValueError(f"k must be in [1, {model.n_components}], got {k}")
    if values.shape[1] != model.n_features:
        raise ValueError(f"expected {model.n_features} columns, got {values.shape[1]}")
    return (values - model.mean) @ model.components[:k].T


def pca_inverse_transform(model: PcaModel, projected: np.ndarray) -> np.ndarray:
    """Map k-component scores back to the original feature space."""
    proj = np.asarray(projected, dtype=np.float64)
    k = proj.shape[1]
    if not 1 <= k <= model.n_components:
        raise ValueError(f"projection has {k} components, model stores {model.n_components}")
    return proj @ model.components[:k] + model.mean
