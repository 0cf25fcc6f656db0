"""Streaming first/second moments over feature rows.

Accumulators hold a running mean and the scatter matrix (sum of outer
products of deviations from the running mean) in float64, updated batch
by batch with the parallel-merge form of Welford's algorithm. Partial
accumulators over disjoint row sets merge exactly, so shard-partitioned
accumulation followed by ``merge`` reproduces single-pass results.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng as rngmod
from .errors import (
    DimensionMismatchError,
    InsufficientDataError,
    NonFiniteDataError,
    NotPositiveSemidefiniteError,
    ShardFormatError,
)
from .shardio import EmbeddingShard

STD_EPS = 1e-12

SUMMARY_MAGIC = b"CSM1"
_SUMMARY_HEADER = struct.Struct("<4sIQI")


@dataclass(frozen=True)
class MomentAccumulator:
    """Running count/mean/scatter of rows of width ``dim``."""

    dim: int
    count: int = 0
    mean: np.ndarray = None
    scatter: np.ndarray = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        mean = self.mean if self.mean is not None else np.zeros(self.dim)
        scatter = self.scatter if self.scatter is not None else np.zeros((self.dim, self.dim))
        object.__setattr__(self, "mean", np.asarray(mean, dtype=np.float64))
        object.__setattr__(self, "scatter", np.asarray(scatter, dtype=np.float64))
        if self.mean.shape != (self.dim,) or self.scatter.shape != (self.dim, self.dim):
            raise ValueError("mean/scatter shapes do not match dim")


def accumulate(acc: MomentAccumulator, rows: np.ndarray) -> MomentAccumulator:
    """Fold a batch of rows into the accumulator.

    The batch's own mean and deviation-product scatter are computed first,
    then merged via the pairwise update, which keeps the running scatter
    numerically stable regardless of batch sizes.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError(f"rows must be 2-D, got shape {rows.shape}")
    if rows.shape[1] != acc.dim:
        raise DimensionMismatchError(f"row width {rows.shape[1]} != accumulator dim {acc.dim}")
    if rows.shape[0] == 0:
        return acc
    if not np.all(np.isfinite(rows)):
        raise NonFiniteDataError("rows contain NaN or Inf")

    n_b = rows.shape[0]
    mean_b = rows.mean(axis=0)
    dev = rows - mean_b
    scatter_b = dev.T @ dev
    batch = MomentAccumulator(dim=acc.dim, count=n_b, mean=mean_b, scatter=scatter_b)
    return merge(acc, batch)


def merge(a: MomentAccumulator, b: MomentAccumulator) -> MomentAccumulator:
    """Combine two accumulators as if their rows had been seen in sequence."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot merge dim {a.dim} with dim {b.dim}")
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    n = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.count / n)
    scatter = a.scatter + b.scatter + np.outer(delta, delta) * (a.count * b.count / n)
    return MomentAccumulator(dim=a.dim, count=n, mean=mean, scatter=scatter)


@dataclass(frozen=True)
class DatasetSummary:
    """Count, mean, and covariance of a dataset's feature rows."""

    name: str
    dim: int
    count: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        if mean.shape != (self.dim,) or cov.shape != (self.dim, self.dim):
            raise ValueError("mean/cov shapes do not match dim")
        if not np.array_equal(cov, cov.T):
            raise ValueError("cov must be exactly symmetric; finalize() symmetrizes")
        trace = float(np.trace(cov))
        tol = 1e-10 * max(1.0, trace)
        lo = float(np.linalg.eigvalsh(cov).min()) if self.dim > 0 else 0.0
        if lo < -tol:
            raise NotPositiveSemidefiniteError(
                f"covariance has eigenvalue {lo:.3e} below tolerance -{tol:.3e}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def finalize(acc: MomentAccumulator, name: str, ddof: int = 1) -> DatasetSummary:
    """Turn an accumulator into a summary.

    ``ddof=1`` gives the unbiased (n-1) covariance, the convention used by
    reference Frechet-distance implementations; ``ddof=0`` gives the
    population (n) form. The covariance is symmetrized exactly.
    """
    if acc.count < 2:
        raise InsufficientDataError(f"need at least 2 rows, have {acc.count}")
    if ddof not in (0, 1):
        raise ValueError("ddof must be 0 or 1")
    cov = acc.scatter / (acc.count - ddof)
    cov = (cov + cov.T) / 2.0
    return DatasetSummary(name=name, dim=acc.dim, count=acc.count, mean=acc.mean.copy(), cov=cov)


def summarize_rows(rows: np.ndarray, name: str, ddof: int = 1) -> DatasetSummary:
    """Single-shot convenience: accumulate one batch and finalize."""
    acc = accumulate(MomentAccumulator(dim=np.asarray(rows).shape[1]), rows)
    return finalize(acc, name, ddof=ddof)


def summarize_shard(
    shard: EmbeddingShard,
    node_policy: str = "all-nodes",
    seed: int = 0,
    name: str | None = None,
    ddof: int = 1,
) -> DatasetSummary:
    """Summarize a shard's node features.

    node_policy:
        "all-nodes"          every node of every graph
        "one-node-per-graph" one uniformly random node per graph, drawn
                             from the stream ``(seed,)`` in shard order
    """
    if shard.graph_count == 0:
        raise InsufficientDataError("shard has no graphs")
    if node_policy == "all-nodes":
        rows = shard.node_matrix()
    elif node_policy == "one-node-per-graph":
        rng = rngmod.stream(seed)
        picks = [g.features[int(rng.integers(g.node_count))] for g in shard.graphs]
        rows = np.stack(picks, axis=0)
    else:
        raise ValueError(f"unknown node_policy {node_policy!r}")
    if rows.shape[0] < 2:
        raise InsufficientDataError(f"policy selected {rows.shape[0]} rows, need >= 2")
    return summarize_rows(rows, name if name is not None else shard.name, ddof=ddof)


def standardize(rows: np.ndarray, ddof: int = 0) -> np.ndarray:
    """Z-score each column: subtract its mean, divide by its std.

    Columns whose std falls below 1e-12 are set to all-zero instead of
    blowing up; dead embedding dimensions then contribute nothing to any
    downstream spectrum. Idempotent for either ddof.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError(f"rows must be 2-D, got shape {rows.shape}")
    if rows.shape[0] < 2:
        raise InsufficientDataError(f"need at least 2 rows to standardize, have {rows.shape[0]}")
    centered = rows - rows.mean(axis=0)
    std = rows.std(axis=0, ddof=ddof)
    # a column of identical large values can show ulp-scale std purely
    # from the mean's rounding; max > min catches constancy exactly
    live = (std >= STD_EPS) & (rows.max(axis=0) > rows.min(axis=0))
    out = np.zeros_like(centered)
    out[:, live] = centered[:, live] / std[live]
    return out


# --- summary persistence: "CSM1" binary plus a JSON mirror ---------------


def summary_path_json(path: str | Path) -> Path:
    return Path(str(path) + ".json")


def write_summary(summary: DatasetSummary, path: str | Path, extra: dict | None = None) -> None:
    """Write the little-endian CSM1 file and its JSON mirror.

    Layout: magic "CSM1", u32 dim, u64 count, u32 name length, UTF-8 name,
    f64 mean[d], f64 cov[d*d] row-major. `extra` keys (seed, provenance)
    go into the mirror only; the binary layout is fixed.
    """
    path = Path(path)
    name_bytes = summary.name.encode("utf-8")
    with open(path, "wb") as f:
        f.write(_SUMMARY_HEADER.pack(SUMMARY_MAGIC, summary.dim, summary.count, len(name_bytes)))
        f.write(name_bytes)
        f.write(np.ascontiguousarray(summary.mean, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(summary.cov, dtype="<f8").tobytes())
    mirror = {
        "name": summary.name,
        "dim": summary.dim,
        "count": summary.count,
        "mean": summary.mean.tolist(),
        "cov": summary.cov.tolist(),
    }
    if extra:
        mirror.update(extra)
    summary_path_json(path).write_text(
        json.dumps(mirror, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_summary(path: str | Path) -> DatasetSummary:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _SUMMARY_HEADER.size:
        raise ShardFormatError(f"{path}: file too short for summary header")
    magic, dim, count, name_len = _SUMMARY_HEADER.unpack_from(data, 0)
    if magic != SUMMARY_MAGIC:
        raise ShardFormatError(f"{path}: bad magic {magic!r}, expected {SUMMARY_MAGIC!r}")
    offset = _SUMMARY_HEADER.size
    expected = offset + name_len + 8 * dim + 8 * dim * dim
    if len(data) != expected:
        raise ShardFormatError(f"{path}: size {len(data)} != expected {expected}")
    name = data[offset : offset + name_len].decode("utf-8")
    offset += name_len
    mean = np.frombuffer(data, dtype="<f8", count=dim, offset=offset).copy()
    offset += 8 * dim
    cov = np.frombuffer(data, dtype="<f8", count=dim * dim, offset=offset).reshape(dim, dim).copy()
    return DatasetSummary(name=name, dim=dim, count=count, mean=mean, cov=cov)
