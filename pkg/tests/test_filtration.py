import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomrips.cob_edge import find_smallest_t
from cohomrips.core import ResourceRefusal
from cohomrips.filtration import build_filtration, memory_account
from cohomrips.ingest import EdgeList, enumerate_edges

from conftest import octahedron, random_cloud, random_graph


def test_sq4_order(sq4):
    assert [sq4.endpoints(k) for k in range(6)] == [(0, 1), (0, 3), (1, 2), (2, 3), (0, 2), (1, 3)]
    assert np.all(np.diff(sq4.values) >= 0)


def test_zero_length_edge_first():
    pts = np.array([[0.0, 0.0], [3.0, 3.0], [0.0, 0.0]])
    f = build_filtration(enumerate_edges(pts))
    assert f.endpoints(0) == (0, 2) and f.values[0] == 0.0


def test_edge_order_lookup(sq4, sq4_cut):
    assert sq4.edge_order(0, 2) == 4
    assert sq4.edge_order(2, 0) == 4
    assert sq4_cut.edge_order(0, 2) is None
    assert sq4.edge_order(1, 1) is None


def test_dense_and_sparse_agree(sq4_points):
    e = enumerate_edges(sq4_points)
    sparse = build_filtration(e)
    dense = build_filtration(e, mode="dense")
    for u in range(4):
        for v in range(4):
            assert sparse.edge_order(u, v) == dense.edge_order(u, v)


def test_dense_cap_refusal(sq4_points):
    with pytest.raises(ResourceRefusal):
        build_filtration(enumerate_edges(sq4_points), mode="dense", dense_cap_bytes=10)


def test_memory_account_examples(sq4):
    assert memory_account(sq4) == 84
    single = build_filtration(EdgeList(1, np.empty(0, np.int64), np.empty(0, np.int64),
                                       np.empty(0)))
    assert memory_account(single) == 3


def test_memory_account_octahedron():
    f = build_filtration(enumerate_edges(octahedron()))
    assert memory_account(f) == 12 * f.n_edges + 3 * f.n


def test_neighborhoods(sq4):
    assert sq4.vertex_neighborhood(0) == [(1, 0), (2, 4), (3, 1)]
    assert sq4.edge_neighborhood(0) == [(1, 0), (3, 1), (2, 4)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_neighborhood_invariants(seed, ties):
    f = build_filtration(random_graph(seed, max_n=14, ties=ties))
    seen = np.zeros(f.n_edges, int)
    for x in range(f.n):
        vn, en = f.vertex_neighborhood(x), f.edge_neighborhood(x)
        assert sorted(vn) == sorted(en)
        assert all(a[0] < b[0] for a, b in zip(vn, vn[1:]))
        assert all(a[1] < b[1] for a, b in zip(en, en[1:]))
        for w, k in vn:
            assert set(f.endpoints(k)) == {x, w}
            seen[k] += 1
    assert (seen == 2).all()
    assert memory_account(f) == 12 * f.n_edges + 3 * f.n


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_rebuild_from_shuffled_input(seed):
    e = random_graph(seed, ties=True)
    perm = np.random.default_rng(seed).permutation(len(e))
    shuffled = EdgeList(e.n, e.u[perm], e.v[perm], e.length[perm])
    a, b = build_filtration(e), build_filtration(shuffled)
    assert np.array_equal(a.eu, b.eu) and np.array_equal(a.ev, b.ev)
    assert np.array_equal(a.values, b.values)
    # sorted by (length, u, v)
    keys = list(zip(a.values, a.eu, a.ev))
    assert keys == sorted(keys)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_lookup_symmetric_and_min_coface(seed):
    f = build_filtration(random_graph(seed))
    for k in range(f.n_edges):
        u, v = f.endpoints(k)
        assert f.edge_order(u, v) == f.edge_order(v, u) == k
        assert f.min_coface(k) == find_smallest_t(f, k).current


def test_random_clouds_memory():
    for seed in range(20):
        f = build_filtration(enumerate_edges(random_cloud(seed), 0.8))
        assert memory_account(f) == 12 * f.n_edges + 3 * f.n
