"""On-disk embedding shard format.

A shard stores the node-level feature rows of a set of molecular graphs,
one float32 block per graph, plus a class id used for binning. The binary
layout is little-endian and bit-exact:

    magic   4 bytes   b"CSI1" (version folded into the magic)
    dim     u32       feature dimension d
    count   u64       number of graphs
    per graph:
        node_count  u32
        class_id    u64
        features    node_count * dim float32, row-major (node-major)

Total file size is therefore ``16 + sum(12 + 4 * n_i * d)`` bytes. A
companion manifest ``<path>.manifest.json`` records the dataset name,
counts, and an optional class-id -> label map.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, NonFiniteDataError, ShardFormatError

MAGIC = b"CSI1"
_HEADER = struct.Struct("<4sIQ")
_GRAPH_HEADER = struct.Struct("<IQ")

MAX_CLASS_ID = 2**64 - 1


@dataclass(frozen=True)
class GraphRecord:
    """One graph: an (n, d) float32 feature block and its class bin key."""

    class_id: int
    features: np.ndarray

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float32)
        if feats.ndim != 2:
            raise ValueError(f"features must be 2-D (nodes x dim), got shape {feats.shape}")
        if feats.shape[0] < 1:
            raise ValueError("graph must have at least one node")
        if not (0 <= self.class_id <= MAX_CLASS_ID):
            raise ValueError(f"class_id must fit in u64, got {self.class_id}")
        object.__setattr__(self, "features", feats)

    @property
    def node_count(self) -> int:
        return self.features.shape[0]


@dataclass
class EmbeddingShard:
    """An ordered collection of graphs sharing one feature dimension."""

    name: str
    dim: int
    graphs: list[GraphRecord] = field(default_factory=list)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        for i, g in enumerate(self.graphs):
            if g.features.shape[1] != self.dim:
                raise DimensionMismatchError(
                    f"graph {i} has width {g.features.shape[1]}, shard dim is {self.dim}"
                )

    @property
    def graph_count(self) -> int:
        return len(self.graphs)

    @property
    def total_nodes(self) -> int:
        return sum(g.node_count for g in self.graphs)

    def node_matrix(self) -> np.ndarray:
        """All node rows stacked into one (total_nodes, dim) float32 array."""
        if not self.graphs:
            return np.empty((0, self.dim), dtype=np.float32)
        return np.concatenate([g.features for g in self.graphs], axis=0)

    def class_ids(self) -> list[int]:
        return [g.class_id for g in self.graphs]


@dataclass
class ShardManifest:
    """JSON sidecar describing a shard file."""

    dataset: str
    dim: int
    graph_count: int
    total_nodes: int
    class_labels: dict[int, str] | None = None
    extra: dict | None = None

    def to_json(self) -> str:
        doc = {
            "dataset": self.dataset,
            "dim": self.dim,
            "graph_count": self.graph_count,
            "total_nodes": self.total_nodes,
        }
        if self.class_labels is not None:
            doc["class_labels"] = {str(k): v for k, v in sorted(self.class_labels.items())}
        if self.extra is not None:
            doc["extra"] = self.extra
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ShardManifest":
        doc = json.loads(text)
        labels = doc.get("class_labels")
        if labels is not None:
            labels = {int(k): v for k, v in labels.items()}
        return cls(
            dataset=doc["dataset"],
            dim=int(doc["dim"]),
            graph_count=int(doc["graph_count"]),
            total_nodes=int(doc["total_nodes"]),
            class_labels=labels,
            extra=doc.get("extra"),
        )


def manifest_path(path: str | Path) -> Path:
    return Path(str(path) + ".manifest.json")


def expected_file_size(shard: EmbeddingShard) -> int:
    """Exact byte size of the shard on disk."""
    return 16 + sum(12 + 4 * g.node_count * shard.dim for g in shard.graphs)


def write_shard(
    shard: EmbeddingShard,
    path: str | Path,
    class_labels: dict[int, str] | None = None,
    extra: dict | None = None,
) -> None:
    """Write a shard and its manifest.

    Rejects non-finite feature values before touching the file. Raises
    DimensionMismatchError / NonFiniteDataError on bad input, OSError on
    I/O failure.
    """
    if shard.dim < 1:
        raise ShardFormatError(f"dim must be >= 1, got {shard.dim}")
    for i, g in enumerate(shard.graphs):
        if g.features.shape[1] != shard.dim:
            raise DimensionMismatchError(
                f"graph {i} has width {g.features.shape[1]}, shard dim is {shard.dim}"
            )
        if not np.all(np.isfinite(g.features)):
            raise NonFiniteDataError(f"graph {i} contains NaN or Inf features")

    path = Path(path)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, shard.dim, shard.graph_count))
        for g in shard.graphs:
            f.write(_GRAPH_HEADER.pack(g.node_count, g.class_id))
            f.write(np.ascontiguousarray(g.features, dtype="<f4").tobytes())

    manifest = ShardManifest(
        dataset=shard.name,
        dim=shard.dim,
        graph_count=shard.graph_count,
        total_nodes=shard.total_nodes,
        class_labels=class_labels,
        extra=extra,
    )
    manifest_path(path).write_text(manifest.to_json() + "\n", encoding="utf-8")


def read_manifest(path: str | Path) -> ShardManifest | None:
    mpath = manifest_path(path)
    if not mpath.exists():
        return None
    return ShardManifest.from_json(mpath.read_text(encoding="utf-8"))


def read_shard(path: str | Path, validate_manifest: bool = True) -> EmbeddingShard:
    """Read a shard file, validating magic, counts, length, and finiteness.

    The dataset name comes from the manifest when present, else the file
    stem. Raises ShardFormatError on any structural problem.
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise ShardFormatError(f"{path}: file too short for header ({len(data)} bytes)")
    magic, dim, graph_count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ShardFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if dim == 0:
        raise ShardFormatError(f"{path}: dim must be >= 1")

    offset = _HEADER.size
    graphs: list[GraphRecord] = []
    for i in range(graph_count):
        if offset + _GRAPH_HEADER.size > len(data):
            raise ShardFormatError(f"{path}: truncated at graph {i} header")
        node_count, class_id = _GRAPH_HEADER.unpack_from(data, offset)
        offset += _GRAPH_HEADER.size
        if node_count == 0:
            raise ShardFormatError(f"{path}: graph {i} declares zero nodes")
        block = 4 * node_count * dim
        if offset + block > len(data):
            raise ShardFormatError(f"{path}: truncated in graph {i} feature block")
        feats = np.frombuffer(data, dtype="<f4", count=node_count * dim, offset=offset)
        feats = feats.reshape(node_count, dim).copy()
        offset += block
        if not np.all(np.isfinite(feats)):
            raise ShardFormatError(f"{path}: graph {i} contains NaN or Inf features")
        graphs.append(GraphRecord(class_id=class_id, features=feats))
    if offset != len(data):
        raise ShardFormatError(
            f"{path}: {len(data) - offset} trailing bytes beyond declared {graph_count} graphs"
        )

    name = path.stem
    if validate_manifest:
        manifest = read_manifest(path)
        if manifest is not None:
            if (manifest.dim, manifest.graph_count) != (dim, graph_count) or (
                manifest.total_nodes != sum(g.node_count for g in graphs)
            ):
                raise ShardFormatError(f"{path}: manifest counts disagree with binary shard")
            name = manifest.dataset
    return EmbeddingShard(name=name, dim=dim, graphs=graphs)


def concat_shards(shards: list[EmbeddingShard]) -> EmbeddingShard:
    """Concatenate shards in input order; names join with '+'."""
    if not shards:
        raise ValueError("need at least one shard")
    dim = shards[0].dim
    for s in shards[1:]:
        if s.dim != dim:
            raise DimensionMismatchError(f"cannot concat dim {s.dim} shard into dim {dim}")
    graphs: list[GraphRecord] = []
    for s in shards:
        graphs.extend(s.graphs)
    return EmbeddingShard(name="+".join(s.name for s in shards), dim=dim, graphs=graphs)
