"""Synthetic embedding shards with controllable class and rank structure.

These generators stand in for real molecular embeddings in tests and
demos: Gaussian mixtures give separable class structure, the
pooled-subspace mode pins every graph's mean inside a low-dimensional
subspace so that mean pooling provably collapses spectral rank while
individual node rows keep full-dimensional noise.

All draws come from the single stream (seed,) in a fixed order (basis,
class centers, then per graph: jitter and node noise), so identical
arguments give byte-identical shards.
"""

from __future__ import annotations

import numpy as np

from . import rng as rngmod
from .shardio import EmbeddingShard, GraphRecord


def zipf_class_ids(graphs: int, classes: int, exponent: float = 1.5, seed: int = 0) -> list[int]:
    """Class ids drawn from a Zipf-like law: p(c) proportional to 1/(c+1)^exponent.

    Produces the heavy-tailed class skew typical of bulk corpora, where a
    few classes dominate and most are rare.
    """
    if graphs < 1 or classes < 1:
        raise ValueError("graphs and classes must be >= 1")
    ranks = np.arange(1, classes + 1, dtype=np.float64)
    weights = ranks**-exponent
    weights /= weights.sum()
    rng = rngmod.stream(seed)
    return [int(c) for c in rng.choice(classes, size=graphs, p=weights)]


def make_gaussian_shard(
    name: str,
    dim: int,
    graphs: int,
    nodes_per_graph: int,
    classes: int,
    class_sep: float = 4.0,
    noise: float = 1.0,
    pooled_subspace: int | None = None,
    class_ids: list[int] | None = None,
    seed: int = 0,
) -> EmbeddingShard:
    """Shard of Gaussian-mixture node features.

    Each class gets a latent center of scale `class_sep`; each graph adds
    unit jitter to its class center and each node adds `noise`-scale
    isotropic noise. With `pooled_subspace=r` the latent space is r
    dimensional and mapped through a random orthonormal d x r basis, and
    node noise is centered within each graph, so every graph's mean
    (hence every mean-pooled row) lies exactly in the r-dim subspace
    while node rows still span all d dimensions. Requires
    nodes_per_graph >= 2 in that mode or the centered noise vanishes.

    `class_ids` overrides the default round-robin assignment (graph g
    gets class g mod classes); ids must be in [0, classes).
    """
    if dim < 1 or graphs < 1 or nodes_per_graph < 1 or classes < 1:
        raise ValueError("dim, graphs, nodes_per_graph, and classes must be >= 1")
    if pooled_subspace is not None and not 1 <= pooled_subspace <= dim:
        raise ValueError(f"pooled_subspace must be in [1, {dim}], got {pooled_subspace}")
    if class_ids is None:
        class_ids = [g % classes for g in range(graphs)]
    elif len(class_ids) != graphs:
        raise ValueError(f"need {graphs} class ids, got {len(class_ids)}")
    elif any(not 0 <= c < classes for c in class_ids):
        raise ValueError(f"class ids must be in [0, {classes})")

    rng = rngmod.stream(seed)
    latent = pooled_subspace if pooled_subspace is not None else dim
    basis = None
    if pooled_subspace is not None:
        basis, _ = np.linalg.qr(rng.standard_normal((dim, latent)))
    centers = class_sep * rng.standard_normal((classes, latent))

    records = []
    for g in range(graphs):
        z = centers[class_ids[g]] + rng.standard_normal(latent)
        mu = basis @ z if basis is not None else z
        eps = noise * rng.standard_normal((nodes_per_graph, dim))
        if basis is not None:
            eps -= eps.mean(axis=0)
        records.append(GraphRecord(class_id=class_ids[g], features=mu + eps))
    return EmbeddingShard(name=name, dim=dim, graphs=tuple(records))


def translate_shard(shard: EmbeddingShard, offset: np.ndarray, name: str) -> EmbeddingShard:
    """Copy of a shard with `offset` added to every node row.

    Translation moves the feature mean without touching the covariance,
    which is the cleanest way to build dataset families with a designed
    distance ordering.
    """
    offset = np.asarray(offset, dtype=np.float64)
    if offset.shape != (shard.dim,):
        raise ValueError(f"offset must have shape ({shard.dim},), got {offset.shape}")
    graphs = tuple(
        GraphRecord(class_id=g.class_id, features=g.features.astype(np.float64) + offset)
        for g in shard.graphs
    )
    return EmbeddingShard(name=name, dim=shard.dim, graphs=graphs)
