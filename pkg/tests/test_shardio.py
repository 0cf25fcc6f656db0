import json
import struct

import numpy as np
import pytest

from chemalign import EmbeddingShard, GraphRecord, read_shard, write_shard
from chemalign.errors import DimensionMismatchError, NonFiniteDataError, ShardFormatError
from chemalign.shardio import (
    ShardManifest,
    concat_shards,
    expected_file_size,
    manifest_path,
    read_manifest,
)

from .conftest import make_shard


def test_graph_record_coerces_to_float32_2d():
    g = GraphRecord(class_id=3, features=[[1.0, 2.0], [3.0, 4.0]])
    assert g.features.dtype == np.float32
    assert g.features.shape == (2, 2)
    assert g.node_count == 2


def test_graph_record_rejects_bad_shapes_and_ids():
    with pytest.raises(ValueError):
        GraphRecord(class_id=0, features=np.zeros((0, 3)))
    with pytest.raises(ValueError):
        GraphRecord(class_id=0, features=np.zeros(3))
    with pytest.raises(ValueError):
        GraphRecord(class_id=-1, features=np.zeros((1, 3)))


def test_shard_rejects_mixed_dims():
    with pytest.raises(DimensionMismatchError):
        EmbeddingShard(
            name="bad",
            dim=2,
            graphs=(
                GraphRecord(class_id=0, features=np.zeros((1, 2))),
                GraphRecord(class_id=0, features=np.zeros((1, 3))),
            ),
        )


def test_round_trip_preserves_everything(rng, tmp_path):
    shard = make_shard(rng, name="trip", dim=5, graphs=12)
    path = tmp_path / "trip.csi1"
    write_shard(shard, path)
    back = read_shard(path)
    assert back.name == "trip"
    assert back.dim == 5
    assert back.graph_count == shard.graph_count
    assert [g.class_id for g in back.graphs] == [g.class_id for g in shard.graphs]
    for a, b in zip(shard.graphs, back.graphs):
        np.testing.assert_array_equal(a.features, b.features)


def test_rewrite_is_byte_identical(rng, tmp_path):
    shard = make_shard(rng, dim=3, graphs=7)
    p1, p2 = tmp_path / "a.csi1", tmp_path / "b.csi1"
    write_shard(shard, p1)
    write_shard(read_shard(p1, validate_manifest=False), p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert manifest_path(p1).read_text() != ""


def test_file_size_formula(rng, tmp_path):
    shard = make_shard(rng, dim=4, graphs=9)
    path = tmp_path / "sized.csi1"
    write_shard(shard, path)
    per_graph = sum(12 + 4 * g.node_count * shard.dim for g in shard.graphs)
    assert path.stat().st_size == 16 + per_graph
    assert expected_file_size(shard) == 16 + per_graph


def test_empty_shard_is_a_valid_16_byte_file(tmp_path):
    shard = EmbeddingShard(name="empty", dim=7, graphs=())
    path = tmp_path / "empty.csi1"
    write_shard(shard, path)
    assert path.stat().st_size == 16
    back = read_shard(path)
    assert back.graph_count == 0
    assert back.dim == 7


def test_rejects_non_finite_payload(tmp_path):
    bad = EmbeddingShard(
        name="nan",
        dim=2,
        graphs=(GraphRecord(class_id=0, features=[[1.0, float("nan")]]),),
    )
    with pytest.raises(NonFiniteDataError):
        write_shard(bad, tmp_path / "nan.csi1")
    assert not (tmp_path / "nan.csi1").exists()


def test_truncated_file_names_graph_index(rng, tmp_path):
    shard = make_shard(rng, dim=3, graphs=4)
    path = tmp_path / "trunc.csi1"
    write_shard(shard, path)
    data = path.read_bytes()
    path.write_bytes(data[:-5])
    with pytest.raises(ShardFormatError, match="graph 3"):
        read_shard(path, validate_manifest=False)


def test_bad_magic_and_trailing_bytes(tmp_path):
    path = tmp_path / "junk.csi1"
    path.write_bytes(b"NOPE" + struct.pack("<IQ", 2, 0))
    with pytest.raises(ShardFormatError, match="magic"):
        read_shard(path)
    path.write_bytes(b"CSI1" + struct.pack("<IQ", 2, 0) + b"xx")
    with pytest.raises(ShardFormatError, match="trailing"):
        read_shard(path)


def test_zero_dim_rejected(tmp_path):
    path = tmp_path / "dim0.csi1"
    path.write_bytes(b"CSI1" + struct.pack("<IQ", 0, 0))
    with pytest.raises(ShardFormatError):
        read_shard(path)


def test_class_id_full_u64_range(tmp_path):
    big = 2**64 - 1
    shard = EmbeddingShard(
        name="big",
        dim=1,
        graphs=(GraphRecord(class_id=big, features=[[0.5]]),),
    )
    path = tmp_path / "big.csi1"
    write_shard(shard, path)
    assert read_shard(path).graphs[0].class_id == big


def test_manifest_written_and_read(rng, tmp_path):
    shard = make_shard(rng, name="withmeta", dim=2, graphs=3)
    path = tmp_path / "meta.csi1"
    write_shard(shard, path, class_labels={0: "water", 1: "methane"}, extra={"seed": 5})
    manifest = read_manifest(path)
    assert manifest.dataset == "withmeta"
    assert manifest.dim == 2
    assert manifest.graph_count == 3
    assert manifest.total_nodes == shard.total_nodes
    assert manifest.class_labels == {0: "water", 1: "methane"}
    assert manifest.extra["seed"] == 5
    # name comes from the manifest on read
    assert read_shard(path).name == "withmeta"


def test_name_falls_back_to_stem_without_manifest(rng, tmp_path):
    shard = make_shard(rng, name="original", dim=2, graphs=2)
    path = tmp_path / "stemname.csi1"
    write_shard(shard, path)
    manifest_path(path).unlink()
    assert read_shard(path).name == "stemname"


def test_manifest_mismatch_detected(rng, tmp_path):
    shard = make_shard(rng, dim=2, graphs=3)
    path = tmp_path / "lie.csi1"
    write_shard(shard, path)
    doc = json.loads(manifest_path(path).read_text())
    doc["graph_count"] = 99
    manifest_path(path).write_text(json.dumps(doc))
    with pytest.raises(ShardFormatError, match="manifest"):
        read_shard(path)
    # opt-out skips the check
    assert read_shard(path, validate_manifest=False).graph_count == 3


def test_manifest_json_round_trip():
    m = ShardManifest(
        dataset="x", dim=3, graph_count=2, total_nodes=5,
        class_labels={7: "seven"}, extra={"seed": 1},
    )
    again = ShardManifest.from_json(m.to_json())
    assert again == m


def test_concat_shards(rng, tmp_path):
    a = make_shard(rng, name="a", dim=3, graphs=4)
    b = make_shard(rng, name="b", dim=3, graphs=6)
    joined = concat_shards([a, b])
    assert joined.name == "a+b"
    assert joined.graph_count == 10
    np.testing.assert_array_equal(joined.graphs[4].features, b.graphs[0].features)
    with pytest.raises(DimensionMismatchError):
        concat_shards([a, make_shard(rng, dim=2, graphs=1)])
