"""Conformance fixtures: small shards plus an expectations file.

gen_reference_fixtures writes a fixed set of shards and a JSON document
of values computed by the in-process reference implementations: moment
summaries, pairwise distances (self-pairs included, which must be 0),
and balanced-sample index sets. A consumer implementation passes
conformance when its own outputs over these shards match the
expectations within 1e-6 for real values and exactly for index sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classes import ClassIdAssigner
from .reference import balanced_sample_indices, frechet_distance, moments
from .shardfmt import ShardGraph, write_shard_file

REAL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FixtureSet:
    directory: Path
    shard_paths: dict[str, Path]
    expectations_path: Path


def _make_shard(
    name: str, sub_seed: int, seed: int, graphs: int, dim: int, classes: int, offset: float
) -> tuple[list[ShardGraph], dict[int, str]]:
    """Skewed-class Gaussian blobs; every class occurs at least once."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, sub_seed]))
    assigner = ClassIdAssigner()
    ids = [assigner.assign(f"{name}-class-{c}") for c in range(classes)]
    # one graph per class up front, then a skewed tail
    weights = 1.0 / np.arange(1, classes + 1) ** 1.5
    tail = rng.choice(classes, size=graphs - classes, p=weights / weights.sum())
    class_seq = list(range(classes)) + [int(c) for c in tail]
    centers = 2.5 * rng.standard_normal((classes, dim))
    out: list[ShardGraph] = []
    for c in class_seq:
        nodes = int(rng.integers(3, 7))
        rows = centers[c] + offset + rng.standard_normal((nodes, dim))
        out.append(ShardGraph(class_id=ids[c], features=rows.astype(np.float32)))
    return out, assigner.labels


def gen_reference_fixtures(directory: str | Path, seed: int = 0) -> FixtureSet:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    specs = {
        "ref-x": dict(sub_seed=1, graphs=40, dim=4, classes=5, offset=0.0),
        "ref-y": dict(sub_seed=2, graphs=40, dim=4, classes=5, offset=1.5),
        "ref-z": dict(sub_seed=3, graphs=60, dim=4, classes=8, offset=0.0),
    }
    shard_paths: dict[str, Path] = {}
    node_rows: dict[str, np.ndarray] = {}
    class_ids: dict[str, list[int]] = {}
    for name, spec in specs.items():
        graphs, labels = _make_shard(name, seed=seed, **spec)
        path = directory / f"{name}.csi1"
        write_shard_file(
            path, dataset=name, dim=spec["dim"], graphs=graphs,
            class_labels=labels, extra={"fixture_seed": seed},
        )
        shard_paths[name] = path
        node_rows[name] = np.concatenate([g.features for g in graphs]).astype(np.float64)
        class_ids[name] = [g.class_id for g in graphs]

    summaries = {}
    fitted = {}
    for name, rows in node_rows.items():
        count, mean, cov = moments(rows)
        fitted[name] = (mean, cov)
        summaries[name] = {"count": count, "mean": mean.tolist(), "cov": cov.tolist()}

    pairs = [("ref-x", "ref-y"), ("ref-x", "ref-z"), ("ref-x", "ref-x"), ("ref-y", "ref-y")]
    distances = []
    for a, b in pairs:
        value = 0.0 if a == b else frechet_distance(*fitted[a], *fitted[b])
        distances.append({"x": a, "y": b, "value": value})

    samples = [
        {"shard": "ref-z", "total": 16, "seed": 3,
         "indices": balanced_sample_indices(class_ids["ref-z"], 16, 3)},
        {"shard": "ref-x", "total": 10, "seed": 1,
         "indices": balanced_sample_indices(class_ids["ref-x"], 10, 1)},
    ]

    expectations = {
        "seed": seed,
        "real_tolerance": REAL_TOLERANCE,
        "summaries": summaries,
        "distances": distances,
        "balanced_samples": samples,
    }
    expectations_path = directory / "expectations.json"
    expectations_path.write_text(
        json.dumps(expectations, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return FixtureSet(directory=directory, shard_paths=shard_paths, expectations_path=expectations_path)
