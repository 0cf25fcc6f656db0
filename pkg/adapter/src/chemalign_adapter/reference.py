"""Independent reference implementations of the consumer-side math.

Used to compute expectation values for conformance fixtures: plain
two-pass moments, the Gaussian Fréchet distance via eigenvalues of the
covariance product, and the documented deterministic sampling rules.
Shares no code with the consumer package; agreement is evidence the
documented contracts fully determine the outputs.
"""

from __future__ import annotations

import numpy as np


def moments(rows: np.ndarray, ddof: int = 1) -> tuple[int, np.ndarray, np.ndarray]:
    """(count, mean, covariance) by the textbook two-pass formula."""
    rows = np.asarray(rows, dtype=np.float64)
    n = rows.shape[0]
    mean = rows.mean(axis=0)
    centered = rows - mean
    cov = centered.T @ centered / (n - ddof)
    return n, mean, (cov + cov.T) / 2.0


def frechet_distance(
    mean_x: np.ndarray, cov_x: np.ndarray, mean_y: np.ndarray, cov_y: np.ndarray
) -> float:
    """||dmu||^2 + tr(Cx) + tr(Cy) - 2 sum sqrt(eig(Cx Cy)), clamped at 0."""
    diff = np.asarray(mean_x, float) - np.asarray(mean_y, float)
    eig = np.linalg.eigvals(np.asarray(cov_x, float) @ np.asarray(cov_y, float))
    cross = 2.0 * np.sqrt(np.clip(eig.real, 0.0, None)).sum()
    value = float(diff @ diff + np.trace(cov_x) + np.trace(cov_y) - cross)
    return max(value, 0.0)


def _stream(*key: int) -> np.random.Generator:
    """The documented stream rule: PCG64 seeded by the composite key."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(key))))


def balanced_sample_indices(class_ids: list[int], total: int, seed: int) -> list[int]:
    """The documented class-balanced draw, reimplemented from its contract.

    Quota: total // class_count each, small classes capped at their size,
    leftover handed out one at a time cycling ascending class id over
    classes with spare capacity. Each class draws from the (seed, class_id)
    stream by choice-without-replacement over its member positions; the
    union is returned ascending by original index.
    """
    bins: dict[int, list[int]] = {}
    for i, cid in enumerate(class_ids):
        bins.setdefault(cid, []).append(i)
    base = total // len(bins)
    quotas = {cid: min(base, len(members)) for cid, members in bins.items()}
    leftover = total - sum(quotas.values())
    while leftover > 0:
        for cid in sorted(bins):
            if leftover == 0:
                break
            if quotas[cid] < len(bins[cid]):
                quotas[cid] += 1
                leftover -= 1
    picked: list[int] = []
    for cid in sorted(bins):
        take = quotas[cid]
        if take == 0:
            continue
        members = bins[cid]
        chosen = _stream(seed, cid).choice(len(members), size=take, replace=False)
        picked.extend(members[int(j)] for j in chosen)
    return sorted(picked)


def uniform_sample_indices(count: int, total: int, seed: int) -> list[int]:
    """The documented uniform draw: (seed,) stream, ascending output."""
    chosen = _stream(seed).choice(count, size=total, replace=False)
    return sorted(int(i) for i in chosen)
