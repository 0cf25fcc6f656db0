"""Effective rank of covariance spectra and node- vs graph-level bootstraps.

The effective rank of a PSD matrix C with eigenvalues l_j is exp(H) where
H is the Shannon entropy (natural log) of p_j = l_j / sum(l). It lies in
[1, d] and measures how many directions carry the spectrum's mass; a
uniform spectrum gives exactly d, a rank-one spectrum gives 1.

The bootstrap protocol compares the expressivity of node-level features
(one random node per graph) against graph-level features (mean-pooled
nodes) on identical graph samples: per repeat, sample k graphs, build the
k x d matrix for each level, z-score each column, take the covariance,
and record its effective rank.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng as rngmod
from .errors import DegenerateSpectrumError, InsufficientDataError
from .frechet import _check_symmetric
from .shardio import EmbeddingShard
from .stats import finalize, standardize, MomentAccumulator, accumulate

LEVELS = ("node", "graph")


def effective_rank(cov: np.ndarray) -> float:
    """exp of the spectral entropy of a symmetric PSD matrix.

    Computed as T * exp(-sum(l * ln l) / T) with T = sum(l), algebraically
    identical to exp(H) but exact for uniform unit spectra. Eigenvalues
    are clamped to >= 0 first; zero eigenvalues contribute 0 (the
    0 * ln 0 = 0 limit). Result is clamped to the provable range [1, d].
    """
    cov = _check_symmetric(cov, "covariance")
    eigvals = np.maximum(np.linalg.eigvalsh(cov), 0.0)
    total = float(eigvals.sum())
    if total <= 0.0:
        raise DegenerateSpectrumError("covariance trace is not positive")
    positive = eigvals[eigvals > 0.0]
    weighted_log = float(np.sum(positive * np.log(positive)))
    value = total * float(np.exp(-weighted_log / total))
    return float(min(max(value, 1.0), cov.shape[0]))


def pool_graph(features: np.ndarray) -> np.ndarray:
    """Mean-pool node rows into one graph-level vector."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 1:
        raise ValueError(f"need a non-empty (nodes x dim) matrix, got shape {features.shape}")
    return features.mean(axis=0)


@dataclass(frozen=True)
class ErankReport:
    """Per-repeat effective ranks for one feature level and sample size."""

    level: str
    k: int
    repeats: int
    per_repeat: tuple[float, ...]
    mean: float
    std: float
    seed: int


def _report(level: str, k: int, values: list[float], seed: int) -> ErankReport:
    arr = np.asarray(values, dtype=np.float64)
    return ErankReport(
        level=level,
        k=k,
        repeats=len(values),
        per_repeat=tuple(float(v) for v in values),
        mean=float(arr.mean()),
        std=float(arr.std()),
        seed=seed,
    )


def _erank_of_rows(rows: np.ndarray) -> float:
    standardized = standardize(rows)
    acc = accumulate(MomentAccumulator(dim=rows.shape[1]), standardized)
    return effective_rank(finalize(acc, "bootstrap").cov)


def _paired_repeat(
    shard: EmbeddingShard, k: int, repeat: int, seed: int
) -> tuple[float, float, np.ndarray]:
    """One repeat of the paired protocol; returns (node, graph, graph indices).

    The repeat's stream is (seed, k, repeat): graph indices are drawn
    first, then one node index per sampled graph, so the graph sample is
    identical whether or not node picks follow.
    """
    rng = rngmod.stream(seed, k, repeat)
    idx = rng.choice(shard.graph_count, size=k, replace=False)
    node_rows = np.empty((k, shard.dim), dtype=np.float64)
    graph_rows = np.empty((k, shard.dim), dtype=np.float64)
    for j, gi in enumerate(idx):
        feats = shard.graphs[int(gi)].features
        node_rows[j] = feats[int(rng.integers(feats.shape[0]))]
        graph_rows[j] = feats.mean(axis=0)
    return _erank_of_rows(node_rows), _erank_of_rows(graph_rows), idx


def bootstrap_erank(
    shard: EmbeddingShard, level: str, k: int, repeats: int, seed: int
) -> ErankReport:
    """Bootstrap the effective rank at one feature level.

    Per repeat: sample k graphs without replacement, build the k x d
    matrix for the level, z-score columns, take the covariance, record
    its effective rank. Repeats resample independently; everything is
    determined by (seed, k, repeat).
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    if k < 2:
        raise InsufficientDataError(f"k must be >= 2, got {k}")
    if k > shard.graph_count:
        raise InsufficientDataError(f"k={k} exceeds graph count {shard.graph_count}")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    values = []
    for r in range(repeats):
        node_val, graph_val, _ = _paired_repeat(shard, k, r, seed)
        values.append(node_val if level == "node" else graph_val)
    return _report(level, k, values, seed)


def paired_erank_study(
    shard: EmbeddingShard,
    ks: list[int] = (5000, 10000, 15000),
    repeats: int = 10,
    seed: int = 0,
) -> list[tuple[int, ErankReport, ErankReport]]:
    """Node- vs graph-level effective ranks on shared graph samples.

    For each k, both levels reuse the exact same k-graph sample in every
    repeat, so per-repeat differences isolate the effect of pooling.
    Defaults mirror the standard protocol: ks = (5000, 10000, 15000),
    10 repeats.
    """
    ks = list(ks)
    if not ks:
        raise ValueError("need at least one k")
    if max(ks) > shard.graph_count:
        raise InsufficientDataError(
            f"max k {max(ks)} exceeds graph count {shard.graph_count}"
        )
    out = []
    for k in ks:
        if k < 2:
            raise InsufficientDataError(f"k must be >= 2, got {k}")
        node_vals, graph_vals = [], []
        for r in range(repeats):
            node_val, graph_val, _ = _paired_repeat(shard, k, r, seed)
            node_vals.append(node_val)
            graph_vals.append(graph_val)
        out.append((k, _report("node", k, node_vals, seed), _report("graph", k, graph_vals, seed)))
    return out


def write_study_csv(path: str | Path, study: list[tuple[int, ErankReport, ErankReport]]) -> None:
    """Per-repeat rows: (k, level, repeat, erank)."""
    with open(Path(path), "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["k", "level", "repeat", "erank"])
        for k, node_rep, graph_rep in study:
            for rep in (node_rep, graph_rep):
                for i, v in enumerate(rep.per_repeat):
                    writer.writerow([k, rep.level, i, v])


def write_study_summary_csv(
    path: str | Path, study: list[tuple[int, ErankReport, ErankReport]]
) -> None:
    """Summary rows: (k, level, mean, std)."""
    with open(Path(path), "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["k", "level", "mean", "std"])
        for k, node_rep, graph_rep in study:
            for rep in (node_rep, graph_rep):
                writer.writerow([k, rep.level, rep.mean, rep.std])
