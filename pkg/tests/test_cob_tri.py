import numpy as np
from hypothesis import given, settings, strategies as st

from cohomrips.cob_tri import (
    find_geq_h, find_next_h, find_smallest_h, is_trivial_tri, triangle_coboundary,
)
from cohomrips.core import PairedIndex, tetra_vertices, triangle_index
from cohomrips.filtration import build_filtration
from cohomrips.ingest import loads

from conftest import BruteIndex, random_graph

P = PairedIndex

# square without diagonals plus an apex joined to every corner: triangles, no tetrahedra
APEX = "0 1 1.0\n1 2 1.1\n2 3 1.2\n0 3 1.3\n0 4 2.0\n1 4 2.1\n2 4 2.2\n3 4 2.3\n"
# two tetrahedra {0,1,2,3} and {0,1,2,4} sharing the face {0,1,2}
TWIN = ("0 1 1.0\n0 2 1.1\n1 2 1.2\n0 3 1.3\n1 3 1.4\n2 3 1.5\n"
        "0 4 1.6\n1 4 1.7\n2 4 1.8\n")


def test_smallest_examples(sq4):
    assert find_smallest_h(sq4, P(4, 1)).current == P(5, 4)
    phi = find_smallest_h(sq4, P(5, 2))
    assert phi.current == P(5, 4) and phi.flag == 0


def test_no_tetrahedra():
    f = build_filtration(loads(APEX, "sparse"))
    tris = BruteIndex(f).triangles()
    assert tris
    for _, t in tris:
        assert find_smallest_h(f, P(*t)).current is None


def test_next_examples(sq4):
    phi = find_smallest_h(sq4, P(4, 1))
    assert find_next_h(sq4, phi).current is None


def test_twin_tetrahedra():
    f = build_filtration(loads(TWIN, "sparse"))
    t = triangle_index((0, 1, 2), f)
    got = list(triangle_coboundary(f, t))
    assert len(got) == 2 and got[0] < got[1]
    assert sorted(tetra_vertices(got[1], f)) == [0, 1, 2, 4]
    assert sorted(tetra_vertices(got[0], f)) == [0, 1, 2, 3]


def test_geq_examples(sq4):
    assert find_geq_h(sq4, P(4, 1), P(0, 0)).current == P(5, 4)
    assert find_geq_h(sq4, P(4, 1), P(5, 4)).current == P(5, 4)
    assert find_geq_h(sq4, P(4, 1), P(5, 5)).current is None


def test_trivial_examples(sq4):
    assert is_trivial_tri(sq4, P(5, 4)) == P(5, 2)


def _check_graph(f, rng):
    brute = BruteIndex(f)
    for verts, t in brute.triangles():
        t = P(*t)
        want = [P(*h) for h in brute.tri_cob(verts)]
        got = []
        phi = find_smallest_h(f, t)
        assert find_geq_h(f, t, phi.current or P(0, 0)) == phi or phi.current is None
        while phi.current is not None:
            h = phi.current
            # flag 0 is Case 1: the tetrahedron shares the triangle's diameter
            assert (phi.flag == 0) == (h.primary == t.primary)
            assert h.primary >= t.primary and phi.flag in (0, 1, 2, 3)
            got.append(h)
            phi = find_next_h(f, phi)
        assert got == want
        targets = [P(int(rng.integers(0, f.n_edges + 1)), int(rng.integers(0, f.n_edges + 1)))
                   for _ in range(6)]
        targets += want + [P(h.primary, h.secondary + 1) for h in want]
        for tgt in targets:
            first = next((h for h in want if h >= tgt), None)
            assert find_geq_h(f, t, tgt).current == first


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_iteration_matches_brute_force(seed, ties):
    f = build_filtration(random_graph(seed, ties=ties))
    _check_graph(f, np.random.default_rng(seed))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_trivial_rule(seed):
    f = build_filtration(random_graph(seed, p=0.9))
    brute = BruteIndex(f)
    tets = {h for verts, _ in brute.triangles() for h in brute.tri_cob(verts)}
    for h in map(lambda x: P(*x), tets):
        cand = P(h.primary, int(f.ev[h.secondary]))
        expect = cand if find_smallest_h(f, cand).current == h else None
        got = is_trivial_tri(f, h)
        assert got == expect
        if got is not None:
            assert set(triangle_vertices_of(f, got)) < set(tetra_vertices(h, f))
            assert f.values[got.primary] == f.values[h.primary]


def triangle_vertices_of(f, t):
    a, b = f.endpoints(t.primary)
    return (a, b, t.secondary)
