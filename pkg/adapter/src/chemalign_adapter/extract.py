"""Run an embedding hook over structures and emit a shard.

Embedding may fan out over threads (hooks that call into native
inference release the GIL); writing is serialized in dataset order so
the output bytes never depend on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classes import ClassIdAssigner, ClassRule, resolve_rule
from .hooks import EmbeddingHook
from .shardfmt import ShardGraph, write_shard_file
from .xyz import Structure, read_xyz


class ExtractionError(ValueError):
    pass


@dataclass
class ExtractionJob:
    """Everything needed to turn structures into one shard file."""

    source: str | Path | list[Structure]
    hook: EmbeddingHook
    output: str | Path
    dataset_name: str
    class_rule: str | ClassRule = "formula"
    limit: int | None = None
    seed: int = 0
    extractor: str = "user-hook"
    workers: int = 1


@dataclass(frozen=True)
class ExtractionResult:
    shard_path: Path
    manifest_path: Path
    graph_count: int
    dim: int
    class_labels: dict[int, str] = field(default_factory=dict)


def _subset(structures: list[Structure], limit: int | None, seed: int) -> list[Structure]:
    """Uniform subset without replacement, original order, when limit applies.

    Uses the documented stream rule for uniform sampling: PCG64 seeded by
    SeedSequence([seed]).
    """
    if limit is None or limit >= len(structures):
        return structures
    if limit < 1:
        raise ExtractionError(f"limit must be >= 1, got {limit}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
    keep = sorted(int(i) for i in rng.choice(len(structures), size=limit, replace=False))
    return [structures[i] for i in keep]


def _embed(hook: EmbeddingHook, structures: list[Structure], workers: int) -> list[np.ndarray]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(hook, structures))
    return [hook(s) for s in structures]


def extract(job: ExtractionJob) -> ExtractionResult:
    """Embed every structure, tag class ids, write shard + manifest.

    The emitted feature dimension must be constant across the job and
    every row finite; violations abort naming the structure index.
    """
    structures = job.source if isinstance(job.source, list) else read_xyz(job.source)
    if not structures:
        raise ExtractionError("no structures to extract")
    structures = _subset(structures, job.limit, job.seed)

    rule = resolve_rule(job.class_rule)
    assigner = ClassIdAssigner()
    blocks = _embed(job.hook, structures, job.workers)

    dim: int | None = None
    graphs: list[ShardGraph] = []
    for i, (structure, rows) in enumerate(zip(structures, blocks)):
        rows = np.asarray(rows, dtype=np.float32)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ExtractionError(f"structure {i}: hook returned shape {rows.shape}, need (nodes, dim)")
        if not np.all(np.isfinite(rows)):
            raise ExtractionError(f"structure {i}: hook returned non-finite features")
        if dim is None:
            dim = rows.shape[1]
        elif rows.shape[1] != dim:
            raise ExtractionError(
                f"structure {i}: hook emitted width {rows.shape[1]}, job started with {dim}"
            )
        graphs.append(ShardGraph(class_id=assigner.assign(rule(structure)), features=rows))

    shard_path = Path(job.output)
    write_shard_file(
        shard_path,
        dataset=job.dataset_name,
        dim=dim,
        graphs=graphs,
        class_labels=assigner.labels,
        extra={
            "extractor": job.extractor,
            "seed": job.seed,
            "source": str(job.source) if not isinstance(job.source, list) else "<in-memory>",
        },
    )
    return ExtractionResult(
        shard_path=shard_path,
        manifest_path=Path(str(shard_path) + ".manifest.json"),
        graph_count=len(graphs),
        dim=dim,
        class_labels=assigner.labels,
    )
