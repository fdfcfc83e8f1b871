"""Union-find component decomposition against a brute-force BFS oracle."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypergiant import (
    ExplorationConfig,
    Hypergraph,
    ModelParams,
    RngStream,
    component_of_set,
    connected_components,
    explore_graph,
    sample_hypergraph,
    size_histogram_csv,
)
from hypergiant.components import _union_edges

from _oracles import bfs_component_sizes, bfs_union_size


def _hg(n, d, rows):
    return Hypergraph(n=n, d=d, edges=np.array(rows, dtype=np.int64).reshape(-1, d))


def _random_hypergraph(seed: int) -> Hypergraph:
    gen = RngStream(seed, 0).generator()
    n = int(gen.integers(3, 16))
    d = int(gen.integers(2, min(n, 5) + 1))
    lam = float(gen.uniform(0.2, 3.0))
    return sample_hypergraph(ModelParams(d=d, lam=lam, n=n), RngStream(seed, 1))


def test_hand_example():
    # Components: {1,2,3,4,5} (two overlapping edges), {6}, {7,8,9}.
    h = _hg(9, 3, [[1, 2, 3], [3, 4, 5], [7, 8, 9]])
    summary = connected_components(h)
    assert summary.sizes.tolist() == [5, 3, 1]
    assert summary.largest == 5
    assert summary.second_largest == 3
    assert summary.count == 3


def test_edgeless_graph():
    h = Hypergraph(n=6, d=3, edges=np.empty((0, 3), dtype=np.int64))
    summary = connected_components(h)
    assert summary.sizes.tolist() == [1] * 6
    assert summary.largest == 1
    assert summary.second_largest == 1
    assert summary.count == 6


def test_single_component():
    h = _hg(4, 4, [[1, 2, 3, 4]])
    summary = connected_components(h)
    assert summary.sizes.tolist() == [4]
    assert summary.second_largest == 0
    assert summary.count == 1


def test_sizes_sum_to_n_random():
    for seed in range(30):
        h = _random_hypergraph(seed)
        summary = connected_components(h)
        assert int(summary.sizes.sum()) == h.n


def test_matches_bfs_oracle_random():
    for seed in range(60):
        h = _random_hypergraph(seed)
        expected = bfs_component_sizes(h.n, h.edges.tolist())
        assert connected_components(h).sizes.tolist() == expected


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_matches_bfs_oracle_property(seed):
    h = _random_hypergraph(seed)
    expected = bfs_component_sizes(h.n, h.edges.tolist())
    assert connected_components(h).sizes.tolist() == expected


def test_component_of_set_matches_bfs_union():
    for seed in range(40):
        h = _random_hypergraph(seed)
        for k in (1, max(1, h.n // 2), h.n):
            expected = bfs_union_size(h.n, h.edges.tolist(), k)
            assert component_of_set(h, k) == expected


def test_component_of_set_monotone_in_k():
    h = _random_hypergraph(7)
    values = [component_of_set(h, k) for k in range(1, h.n + 1)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] == h.n


def test_component_of_set_rejects_bad_k():
    h = _hg(5, 3, [[1, 2, 3]])
    with pytest.raises(ValueError):
        component_of_set(h, 0)
    with pytest.raises(ValueError):
        component_of_set(h, 6)


def test_component_of_set_matches_exploration_hit_time():
    # The walk started from k active vertices absorbs at zero exactly when
    # the union of their components is exhausted, so the hit time equals the
    # union size.
    cfg = ExplorationConfig(start_active=3, stop="hit_zero")
    for seed in range(25):
        h = _random_hypergraph(seed)
        if h.n < 3:
            continue
        params = ModelParams(d=h.d, lam=1.0, n=h.n)
        trace = explore_graph(h, params, cfg)
        assert trace.hit_zero_time == component_of_set(h, 3)


def test_size_histogram_csv():
    h = _hg(9, 3, [[1, 2, 3], [3, 4, 5], [7, 8, 9]])
    text = size_histogram_csv(connected_components(h))
    assert text == "size,count\n1,1\n3,1\n5,1\n"


def test_size_histogram_csv_mass_conserved():
    for seed in range(10):
        h = _random_hypergraph(seed)
        lines = size_histogram_csv(connected_components(h)).strip().splitlines()
        assert lines[0] == "size,count"
        rows = [tuple(map(int, ln.split(","))) for ln in lines[1:]]
        sizes = [s for s, _ in rows]
        assert sizes == sorted(sizes)
        assert sum(s * c for s, c in rows) == h.n


def test_union_find_python_fallback_matches_jit():
    if not hasattr(_union_edges, "py_func"):
        pytest.skip("jit disabled; fallback is the only path")
    for seed in range(10):
        h = _random_hypergraph(seed)
        parent_a = np.arange(h.n + 1, dtype=np.int64)
        size_a = np.ones(h.n + 1, dtype=np.int64)
        parent_b = parent_a.copy()
        size_b = size_a.copy()
        if h.num_edges:
            _union_edges(parent_a, size_a, h.edges.ravel(), h.d)
            _union_edges.py_func(parent_b, size_b, h.edges.ravel(), h.d)

        def roots(parent):
            out = np.empty(h.n, dtype=np.int64)
            for v in range(1, h.n + 1):
                r = v
                while parent[r] != r:
                    r = parent[r]
                out[v - 1] = r
            return out

        assert np.array_equal(roots(parent_a), roots(parent_b))
