import itertools

import numpy as np
import pytest

from cohomrips.filtration import build_filtration
from cohomrips.ingest import EdgeList, enumerate_edges, loads

SQ4_TEXT = "0 0\n1 0\n1 1\n0 1\n"


def octahedron():
    return np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)


def random_cloud(seed, lo=4, hi=15, dim=3):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(lo, hi + 1))
    return rng.random((n, dim))


def diameter(points):
    diff = points[:, None, :] - points[None, :, :]
    return float(np.sqrt((diff ** 2).sum(-1)).max())


def random_graph(seed, max_n=12, p=None, ties=False):
    """Edge list of a random graph with random (optionally tied) lengths."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, max_n + 1))
    p = rng.uniform(0.35, 1.0) if p is None else p
    pairs = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    if ties:
        lengths = rng.integers(1, 5, len(pairs)).astype(float)
    else:
        lengths = rng.random(len(pairs))
    u = np.array([a for a, _ in pairs], dtype=np.int64)
    v = np.array([b for _, b in pairs], dtype=np.int64)
    return EdgeList(n, u, v, np.asarray(lengths, float))


class BruteIndex:
    """Paired indices and coboundaries computed from scratch by enumeration."""

    def __init__(self, filt):
        self.filt = filt
        self.order = {}
        for k in range(filt.n_edges):
            a, b = filt.endpoints(k)
            self.order[(a, b)] = self.order[(b, a)] = k
        self.adj = {v: set() for v in range(filt.n)}
        for a, b in list(self.order):
            self.adj[a].add(b)

    def tri(self, a, b, c):
        o = self.order
        return max((o[(a, b)], c), (o[(a, c)], b), (o[(b, c)], a))

    def tet(self, vs):
        o = self.order
        best = None
        for x, y in itertools.combinations(vs, 2):
            rest = [w for w in vs if w not in (x, y)]
            cand = (o[(x, y)], o[(rest[0], rest[1])])
            if best is None or cand[0] > best[0]:
                best = cand
        return best

    def triangles(self):
        out = []
        for a, b, c in itertools.combinations(range(self.filt.n), 3):
            if b in self.adj[a] and c in self.adj[a] and c in self.adj[b]:
                out.append(((a, b, c), self.tri(a, b, c)))
        return out

    def edge_cob(self, k):
        a, b = self.filt.endpoints(k)
        return sorted(self.tri(*sorted((a, b, c))) for c in self.adj[a] & self.adj[b])

    def tri_cob(self, verts):
        s = set(verts)
        common = set.intersection(*(self.adj[x] for x in verts)) - s
        return sorted(self.tet(tuple(sorted(s | {d}))) for d in common)


@pytest.fixture
def sq4_points():
    return loads(SQ4_TEXT, "cloud")


@pytest.fixture
def sq4(sq4_points):
    return build_filtration(enumerate_edges(sq4_points))


@pytest.fixture
def sq4_cut(sq4_points):
    return build_filtration(enumerate_edges(sq4_points, 1.2))


# acceptance criteria report one line each at the end of the session
_CRITERIA: dict = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    _CRITERIA[number] = ("PASS" if ok else "FAIL", detail)


def record_skip(number: int, reason: str) -> None:
    _CRITERIA[number] = ("SKIP", reason)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status} - {detail}")
