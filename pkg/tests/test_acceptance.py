"""Acceptance suite: one test per release criterion.

Each test is a self-contained check with its tolerances inline; the
terminal summary prints one [PASS]/[FAIL] line per criterion. Oracles
live in tests/reference.py and were written against the formulas
directly, not against the package.
"""

import time

import numpy as np

from chemalign import (
    DatasetSummary,
    EmbeddingShard,
    GraphRecord,
    MomentAccumulator,
    accumulate,
    budget_ratio,
    build_class_index,
    csi,
    effective_rank,
    finalize,
    make_budget,
    merge,
    paired_erank_study,
    plan_samples,
    rank_upstreams,
    read_shard,
    summarize_rows,
    write_shard,
)
from chemalign.sampling import sample_balanced, sample_uniform
from chemalign.shardio import expected_file_size
from chemalign.synthetic import make_gaussian_shard, zipf_class_ids

from .reference import (
    dense_frechet,
    diagonal_frechet,
    entropy_erank,
    random_orthogonal,
    random_psd,
    two_pass_cov,
)


def summary_of(mean, cov, name="s"):
    mean = np.asarray(mean, dtype=np.float64)
    return DatasetSummary(name=name, dim=mean.shape[0], count=1000, mean=mean, cov=np.asarray(cov, float))


def test_criterion_01_frechet_matches_closed_form_on_200_diagonal_pairs():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for _ in range(200):
        d = int(rng.integers(1, 17))
        mu_x, mu_y = 3 * rng.standard_normal(d), 3 * rng.standard_normal(d)
        var_x, var_y = rng.uniform(0.05, 9.0, d), rng.uniform(0.05, 9.0, d)
        got = csi(summary_of(mu_x, np.diag(var_x)), summary_of(mu_y, np.diag(var_y))).value
        want = diagonal_frechet(mu_x, var_x, mu_y, var_y)
        assert abs(got - want) <= 1e-8 * max(1.0, abs(want)), (got, want, d)
    assert time.perf_counter() - start < 1.0


def test_criterion_02_frechet_matches_dense_eigensolver_on_100_general_pairs():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    for _ in range(100):
        d = int(rng.integers(2, 9))
        x = summary_of(rng.standard_normal(d), random_psd(rng, d))
        y = summary_of(rng.standard_normal(d), random_psd(rng, d))
        got = csi(x, y).value
        want = dense_frechet(x.mean, x.cov, y.mean, y.cov)
        assert abs(got - want) <= 1e-6 * max(1.0, abs(want)), (got, want, d)
    assert time.perf_counter() - start < 5.0


def test_criterion_03_identity_and_symmetry_over_100_random_summaries():
    rng = np.random.default_rng(303)
    summaries = [
        summary_of(rng.standard_normal(5), random_psd(rng, 5), name=f"s{i}")
        for i in range(100)
    ]
    for s in summaries:
        assert csi(s, s).value <= 1e-6
    for x, y in zip(summaries[0::2], summaries[1::2]):
        a, b = csi(x, y).value, csi(y, x).value
        assert abs(a - b) <= 1e-6 * max(1.0, a)


def test_criterion_04_effective_rank_formula_and_invariances():
    for d in range(1, 17):
        assert effective_rank(np.eye(d)) == float(d)
    assert abs(effective_rank(np.diag([2.0, 1.0, 1.0])) - 2.0**1.5) <= 1e-10
    rng = np.random.default_rng(404)
    for _ in range(100):
        d = int(rng.integers(2, 9))
        c = random_psd(rng, d)
        base = effective_rank(c)
        scale = float(rng.uniform(1e-3, 1e3))
        assert abs(effective_rank(scale * c) - base) <= 1e-8
        q = random_orthogonal(rng, d)
        assert abs(effective_rank(q @ c @ q.T) - base) <= 1e-8
        assert abs(base - entropy_erank(c)) <= 1e-8


def test_criterion_05_bootstrap_protocol_on_pooled_subspace_fixture():
    shard = make_gaussian_shard(
        name="pooled", dim=8, graphs=200, nodes_per_graph=6, classes=4,
        class_sep=3.0, noise=1.0, pooled_subspace=2, seed=42,
    )
    ks = [50, 100, 150]
    study = paired_erank_study(shard, ks=ks, seed=7)  # repeats stays at its default
    again = paired_erank_study(shard, ks=ks, seed=7)
    assert study == again  # seed determinism
    assert [k for k, _, _ in study] == ks
    for _, node_rep, graph_rep in study:
        assert node_rep.repeats == 10
        assert len(node_rep.per_repeat) == 10
        assert len(graph_rep.per_repeat) == 10
        for node_val, graph_val in zip(node_rep.per_repeat, graph_rep.per_repeat):
            assert node_val > graph_val


def test_criterion_06_balanced_sampling_beats_uniform_coverage():
    class_ids = list(range(50)) + zipf_class_ids(950, 50, exponent=1.5, seed=0)
    shard = make_gaussian_shard(
        name="skew", dim=2, graphs=1000, nodes_per_graph=1, classes=50,
        class_ids=class_ids, seed=0,
    )
    index = build_class_index(shard)
    assert index.class_count == 50
    uniform_coverage = []
    for seed in range(20):
        balanced = sample_balanced(shard, index, total=100, seed=seed)
        uniform = sample_uniform(shard, total=100, seed=seed)
        assert balanced.graph_count == 100
        assert uniform.graph_count == 100
        assert len({g.class_id for g in balanced.graphs}) == 50
        uniform_coverage.append(len({g.class_id for g in uniform.graphs}))
    assert np.median(uniform_coverage) < 50


def test_criterion_07_budget_arithmetic_exact():
    small = make_budget(5, 2_000_000)
    assert small.budget == 10_000_000
    jmp = make_budget(2, 120_000_000)
    assert budget_ratio(small, jmp) == 1 / 24
    assert plan_samples(10_000_000, 10) == 1_000_000


def test_criterion_08_designed_ranking_holds_on_100_seeds():
    offsets = (2.0, 4.0, 6.0, 8.0)
    direction = np.eye(6)[0]
    for seed in range(100):
        rng = np.random.default_rng(seed)
        transform = rng.standard_normal((6, 6)) * 0.5 + np.eye(6)
        down_rows = rng.standard_normal((400, 6)) @ transform
        downstream = summarize_rows(down_rows, "down")
        upstream = []
        for i, off in enumerate(offsets):
            rows = rng.standard_normal((400, 6)) @ transform + off * direction
            upstream.append(summarize_rows(rows, f"u{i}"))
        order = rng.permutation(4)
        report = rank_upstreams([upstream[i] for i in order], downstream)
        assert [name for name, _ in report.ranked] == ["u0", "u1", "u2", "u3"], seed
        assert report.selected == "u0", seed


def test_criterion_09_streaming_covariance_matches_two_pass():
    rng = np.random.default_rng(909)
    rows = rng.standard_normal((10_000, 64)) * rng.uniform(0.5, 2.0, 64)
    acc = MomentAccumulator(dim=64)
    for start in range(0, 10_000, 997):  # uneven chunks exercise the update
        acc = accumulate(acc, rows[start : start + 997])
    streamed = finalize(acc, "streamed")
    mean_ref, cov_ref = two_pass_cov(rows)
    assert np.linalg.norm(streamed.cov - cov_ref) <= 1e-10 * np.linalg.norm(cov_ref)
    assert np.linalg.norm(streamed.mean - mean_ref) <= 1e-10 * max(1.0, np.linalg.norm(mean_ref))

    thirds = np.array_split(rows, 3)
    merged = MomentAccumulator(dim=64)
    for part in thirds:
        merged = merge(merged, accumulate(MomentAccumulator(dim=64), part))
    merged_cov = finalize(merged, "merged").cov
    assert np.linalg.norm(merged_cov - cov_ref) <= 1e-10 * np.linalg.norm(cov_ref)


def test_criterion_10_shard_round_trip_and_size_formula(tmp_path):
    rng = np.random.default_rng(1010)
    for i in range(50):
        dim = int(rng.integers(1, 13))
        n_graphs = int(rng.integers(0, 16))
        graphs = tuple(
            GraphRecord(
                class_id=int(rng.integers(0, 2**63)),
                features=rng.standard_normal((int(rng.integers(1, 9)), dim)),
            )
            for _ in range(n_graphs)
        )
        shard = EmbeddingShard(name=f"rt{i}", dim=dim, graphs=graphs)
        path = tmp_path / f"rt{i}.csi1"
        write_shard(shard, path)
        size = path.stat().st_size
        assert size == 16 + sum(12 + 4 * g.node_count * dim for g in graphs)
        assert size == expected_file_size(shard)
        back = read_shard(path)
        rewritten = tmp_path / f"rt{i}b.csi1"
        write_shard(back, rewritten)
        assert path.read_bytes() == rewritten.read_bytes()
        assert [g.class_id for g in back.graphs] == [g.class_id for g in graphs]
        for a, b in zip(graphs, back.graphs):
            np.testing.assert_array_equal(a.features, b.features)
