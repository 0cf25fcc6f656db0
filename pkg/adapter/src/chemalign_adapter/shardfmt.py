"""Self-contained writer/reader for the embedding shard format.

Byte layout, little-endian: magic "CSI1", u32 dim, u64 graph count, then
per graph u32 node count, u64 class id, and node_count x dim float32
rows. The manifest sidecar <path>.manifest.json carries the dataset
name, counts, the class-id -> label map, and free-form extra metadata.

This module is deliberately independent: it shares no code with the
consumer package, only the documented format, so round-trip tests prove
the format itself rather than one implementation agreeing with itself.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"CSI1"
_HEADER = struct.Struct("<4sIQ")
_GRAPH = struct.Struct("<IQ")


class ShardWriteError(ValueError):
    pass


@dataclass(frozen=True)
class ShardGraph:
    class_id: int
    features: np.ndarray  # (nodes, dim) float32


def write_shard_file(
    path: str | Path,
    dataset: str,
    dim: int,
    graphs: list[ShardGraph],
    class_labels: dict[int, str] | None = None,
    extra: dict | None = None,
) -> None:
    """Write the binary shard and its manifest sidecar."""
    path = Path(path)
    total_nodes = 0
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, dim, len(graphs)))
        for i, g in enumerate(graphs):
            feats = np.ascontiguousarray(g.features, dtype="<f4")
            if feats.ndim != 2 or feats.shape[1] != dim:
                raise ShardWriteError(f"graph {i}: shape {feats.shape} does not match dim {dim}")
            if feats.shape[0] < 1:
                raise ShardWriteError(f"graph {i}: needs at least one node")
            if not np.all(np.isfinite(feats)):
                raise ShardWriteError(f"graph {i}: non-finite features")
            total_nodes += feats.shape[0]
            f.write(_GRAPH.pack(feats.shape[0], g.class_id))
            f.write(feats.tobytes())

    manifest = {
        "dataset": dataset,
        "dim": dim,
        "graph_count": len(graphs),
        "total_nodes": total_nodes,
    }
    if class_labels is not None:
        manifest["class_labels"] = {str(k): v for k, v in sorted(class_labels.items())}
    if extra is not None:
        manifest["extra"] = extra
    Path(str(path) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_shard_file(path: str | Path) -> tuple[int, list[ShardGraph]]:
    """Read back (dim, graphs); validates magic, counts, and exact length."""
    data = Path(path).read_bytes()
    magic, dim, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    offset = _HEADER.size
    graphs: list[ShardGraph] = []
    for i in range(count):
        nodes, class_id = _GRAPH.unpack_from(data, offset)
        offset += _GRAPH.size
        feats = np.frombuffer(data, dtype="<f4", count=nodes * dim, offset=offset)
        graphs.append(ShardGraph(class_id=class_id, features=feats.reshape(nodes, dim).copy()))
        offset += 4 * nodes * dim
    if offset != len(data):
        raise ValueError(f"{path}: {len(data) - offset} trailing bytes")
    return dim, graphs


def read_manifest_file(path: str | Path) -> dict:
    return json.loads(Path(str(path) + ".manifest.json").read_text(encoding="utf-8"))
