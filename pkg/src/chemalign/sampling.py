"""Class-balanced and uniform graph sampling from embedding shards.

Balanced sampling fights the heavy class skew of bulk molecular corpora:
every class gets an equal base quota, classes too small to fill theirs
contribute everything they have, and the leftover budget cycles over the
remaining classes. Uniform sampling is the baseline it is compared with.

Per-class draws use the stream (seed, class_id), so one class's picks do
not depend on what the other classes contain. Sampled graphs keep their
original relative order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from . import rng as rngmod
from .errors import InsufficientDataError
from .shardio import EmbeddingShard

DEFAULT_TOTAL = 10_000


@dataclass(frozen=True)
class ClassIndex:
    """Graph indices grouped by class id, each group in shard order."""

    bins: dict[int, tuple[int, ...]]

    @property
    def class_count(self) -> int:
        return len(self.bins)

    @property
    def total(self) -> int:
        return sum(len(b) for b in self.bins.values())

    def sizes(self) -> dict[int, int]:
        return {cid: len(b) for cid, b in self.bins.items()}


def build_class_index(shard: EmbeddingShard) -> ClassIndex:
    if shard.graph_count == 0:
        raise InsufficientDataError("cannot index an empty shard")
    bins: dict[int, list[int]] = {}
    for i, g in enumerate(shard.graphs):
        bins.setdefault(g.class_id, []).append(i)
    return ClassIndex(bins={cid: tuple(v) for cid, v in bins.items()})


def balanced_quotas(sizes: dict[int, int], total: int) -> dict[int, int]:
    """Per-class take counts for a balanced sample of exactly `total`.

    Base quota is total // class_count. Classes smaller than the quota are
    capped at their size; the freed budget (plus the integer-division
    remainder) is handed out one graph at a time over classes with spare
    capacity, cycling in ascending class id order.
    """
    if total < 0:
        raise ValueError(f"total must be >= 0, got {total}")
    if not sizes:
        raise InsufficientDataError("no classes to sample from")
    population = sum(sizes.values())
    if total > population:
        raise InsufficientDataError(f"requested {total} graphs from {population}")
    base = total // len(sizes)
    quotas = {cid: min(base, n) for cid, n in sizes.items()}
    leftover = total - sum(quotas.values())
    order = sorted(sizes)
    while leftover > 0:
        open_bins = [cid for cid in order if quotas[cid] < sizes[cid]]
        if not open_bins:
            raise AssertionError("quota redistribution ran out of capacity")
        for cid in open_bins:
            if leftover == 0:
                break
            quotas[cid] += 1
            leftover -= 1
    return quotas


def balanced_indices(index: ClassIndex, total: int, seed: int = 0) -> list[int]:
    """Graph indices of a balanced sample, ascending by original index."""
    quotas = balanced_quotas(index.sizes(), total)
    picked: list[int] = []
    for cid in sorted(index.bins):
        take = quotas[cid]
        if take == 0:
            continue
        members = index.bins[cid]
        rng = rngmod.stream(seed, cid)
        chosen = rng.choice(len(members), size=take, replace=False)
        picked.extend(members[int(j)] for j in chosen)
    return sorted(picked)


def uniform_indices(shard: EmbeddingShard, total: int, seed: int = 0) -> list[int]:
    """Graph indices of a uniform sample, ascending by original index."""
    if total < 0:
        raise ValueError(f"total must be >= 0, got {total}")
    if total > shard.graph_count:
        raise InsufficientDataError(f"requested {total} graphs from {shard.graph_count}")
    rng = rngmod.stream(seed)
    chosen = rng.choice(shard.graph_count, size=total, replace=False)
    return sorted(int(i) for i in chosen)


def subset_shard(shard: EmbeddingShard, indices: list[int], name: str | None = None) -> EmbeddingShard:
    """New shard holding the given graphs, in the given order."""
    graphs = tuple(shard.graphs[i] for i in indices)
    return EmbeddingShard(name=name or f"{shard.name}-sample", dim=shard.dim, graphs=graphs)


def sample_balanced(
    shard: EmbeddingShard,
    index: ClassIndex | None = None,
    total: int = DEFAULT_TOTAL,
    seed: int = 0,
) -> EmbeddingShard:
    """Class-balanced sample of exactly `total` graphs as a new shard.

    Covers every class whenever total >= class count. The default total
    matches the standard subsample size for distance computation.
    """
    if index is None:
        index = build_class_index(shard)
    return subset_shard(shard, balanced_indices(index, total, seed))


def sample_uniform(
    shard: EmbeddingShard, total: int = DEFAULT_TOTAL, seed: int = 0
) -> EmbeddingShard:
    """Uniform sample without replacement of exactly `total` graphs as a new shard."""
    return subset_shard(shard, uniform_indices(shard, total, seed))


def coverage_report(original: ClassIndex, sample: EmbeddingShard) -> dict[int, tuple[int, int]]:
    """Per-class (sampled count, original count); uncovered classes report 0."""
    sampled: dict[int, int] = {cid: 0 for cid in original.bins}
    for g in sample.graphs:
        if g.class_id not in sampled:
            raise ValueError(f"sampled class {g.class_id} absent from the index")
        sampled[g.class_id] += 1
    return {cid: (sampled[cid], len(original.bins[cid])) for cid in sorted(original.bins)}


def write_coverage_csv(
    path: str | Path,
    report: dict[int, tuple[int, int]],
    labels: dict[int, str] | None = None,
) -> None:
    """Rows: (class_id, label, sampled, original)."""
    labels = labels or {}
    with open(Path(path), "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["class_id", "label", "sampled", "original"])
        for cid, (got, have) in report.items():
            writer.writerow([cid, labels.get(cid, ""), got, have])
