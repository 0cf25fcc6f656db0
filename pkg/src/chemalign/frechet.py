"""Chemical Similarity Index: Frechet distance between dataset summaries.

For summaries (mu_x, cov_x) and (mu_y, cov_y) the index is

    ||mu_x - mu_y||^2 + Tr(cov_x + cov_y - 2 (cov_x cov_y)^(1/2))

The square root of the non-symmetric product is never formed directly:
with S = cov_x^(1/2), the matrix S cov_y S is symmetric PSD and similar
to cov_x cov_y, so Tr((cov_x cov_y)^(1/2)) equals the sum of square roots
of eigvalsh(S cov_y S). Symmetric eigensolvers keep this path stable and
exactly symmetric in the two arguments up to round-off.

Lower values mean closer alignment between the two feature distributions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, NotPositiveSemidefiniteError
from .stats import DatasetSummary


def _sym_tolerance(m: np.ndarray) -> float:
    return 1e-10 * max(1.0, float(np.trace(m)))


def _check_symmetric(m: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be square, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()) if m.size else 0.0)
    if float(np.abs(m - m.T).max()) > 1e-10 * scale:
        raise ValueError(f"{what} is not symmetric within tolerance")
    return (m + m.T) / 2.0


def _clamped_eigvalsh(m: np.ndarray, what: str) -> tuple[np.ndarray, int]:
    """Eigenvalues of a symmetric matrix with tiny negatives clamped to 0.

    Negatives within the tolerance band are round-off and get clamped
    (counted); anything below the band means genuinely indefinite input.
    """
    eigvals = np.linalg.eigvalsh(m)
    tol = _sym_tolerance(m)
    lo = float(eigvals.min()) if eigvals.size else 0.0
    if lo < -tol:
        raise NotPositiveSemidefiniteError(
            f"{what} has eigenvalue {lo:.3e} below tolerance -{tol:.3e}"
        )
    clamped = int(np.count_nonzero(eigvals < 0.0))
    return np.maximum(eigvals, 0.0), clamped


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues in the round-off band below zero are clamped; an
    eigenvalue beyond the band raises NotPositiveSemidefiniteError.
    """
    m = _check_symmetric(m, "matrix")
    eigvals, vecs = np.linalg.eigh(m)
    tol = _sym_tolerance(m)
    lo = float(eigvals.min()) if eigvals.size else 0.0
    if lo < -tol:
        raise NotPositiveSemidefiniteError(
            f"matrix has eigenvalue {lo:.3e} below tolerance -{tol:.3e}"
        )
    root = vecs @ np.diag(np.sqrt(np.maximum(eigvals, 0.0))) @ vecs.T
    return (root + root.T) / 2.0


@dataclass(frozen=True)
class CsiValue:
    """A similarity index value plus its mean/trace decomposition."""

    value: float
    mean_term: float
    trace_term: float
    clamped_eigenvalues: int = 0


def csi(x: DatasetSummary, y: DatasetSummary, ridge: float = 0.0) -> CsiValue:
    """Similarity index between two summaries.

    ``ridge`` adds ridge * I to both covariances before the computation;
    useful when a summary was built from fewer rows than dimensions and
    its covariance is rank deficient. Default adds nothing.

    The reported value is clamped to >= 0; a raw value more negative than
    the round-off band (1e-8 of the problem scale) raises, since that
    signals inconsistent inputs rather than round-off.
    """
    if x.dim != y.dim:
        raise DimensionMismatchError(f"dim mismatch: {x.dim} vs {y.dim}")
    if ridge < 0:
        raise ValueError("ridge must be >= 0")

    cov_x = x.cov
    cov_y = y.cov
    if ridge > 0:
        eye = np.eye(x.dim)
        cov_x = cov_x + ridge * eye
        cov_y = cov_y + ridge * eye

    delta = x.mean - y.mean
    mean_term = float(delta @ delta)

    s = sqrt_psd(cov_x)
    inner = s @ cov_y @ s
    inner = (inner + inner.T) / 2.0
    eigvals, clamped = _clamped_eigvalsh(inner, "covariance product")
    trace_term = float(np.trace(cov_x) + np.trace(cov_y) - 2.0 * np.sum(np.sqrt(eigvals)))

    raw = mean_term + trace_term
    scale = max(1.0, mean_term + float(np.trace(cov_x)) + float(np.trace(cov_y)))
    if raw < -1e-8 * scale:
        raise NotPositiveSemidefiniteError(
            f"similarity index {raw:.3e} is negative beyond round-off; inputs look inconsistent"
        )
    return CsiValue(
        value=max(raw, 0.0),
        mean_term=mean_term,
        trace_term=trace_term,
        clamped_eigenvalues=clamped,
    )


def csi_matrix(
    upstream: list[DatasetSummary],
    downstream: list[DatasetSummary],
    ridge: float = 0.0,
) -> list[list[CsiValue]]:
    """Entry (i, j) is csi(upstream[i], downstream[j])."""
    return [[csi(u, d, ridge=ridge) for d in downstream] for u in upstream]


def write_csi_matrix_csv(
    path: str | Path,
    upstream_names: list[str],
    downstream_names: list[str],
    matrix: list[list[CsiValue]],
) -> None:
    """Heatmap-ready CSV: downstream names across, one row per upstream."""
    with open(Path(path), "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["upstream"] + list(downstream_names))
        for name, row in zip(upstream_names, matrix):
            writer.writerow([name] + [format(v.value, ".6g") for v in row])
