"""Sorted edge filtration and per-vertex neighborhoods.

Edges are sorted by ``(length, u, v)``; the position in that list is the
edge order.  Every vertex carries two views of its neighbors, both stored
CSR-style with one offset per vertex:

* vertex-neighborhood: ``(neighbor, edge order)`` sorted by neighbor id
* edge-neighborhood:   the same entries sorted by edge order

Numba kernels receive a :class:`Graph` namedtuple of the raw arrays.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from .core import ResourceRefusal, check_capacity, decode
from .ingest import EdgeList

DEFAULT_DENSE_CAP = 16 * 2**30

Graph = namedtuple(
    "Graph",
    "n n_e eu ev deg nb_ptr nb_vtx nb_ord en_ptr en_vtx en_ord min_cob dense use_dense",
)


@njit(cache=True, nogil=True)
def lookup(G, x, y):
    """Order of edge ``{x, y}`` or -1; binary search in the smaller neighborhood."""
    if G.use_dense:
        return np.int64(G.dense[x, y])
    if G.deg[x] > G.deg[y]:
        x, y = y, x
    lo = G.nb_ptr[x]
    hi = lo + G.deg[x]
    while lo < hi:
        mid = (lo + hi) >> 1
        w = np.int64(G.nb_vtx[mid])
        if w < y:
            lo = mid + 1
        elif w > y:
            hi = mid
        else:
            return np.int64(G.nb_ord[mid])
    return np.int64(-1)


@njit(cache=True, nogil=True)
def lb_edge(G, x, k):
    """First index in the edge-neighborhood of ``x`` with edge order ``>= k``."""
    base = G.en_ptr[x]
    lo = np.int64(0)
    hi = np.int64(G.deg[x])
    while lo < hi:
        mid = (lo + hi) >> 1
        if np.int64(G.en_ord[base + mid]) < k:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, nogil=True)
def lb_vertex(G, x, v):
    """First index in the vertex-neighborhood of ``x`` with neighbor id ``>= v``."""
    base = G.nb_ptr[x]
    lo = np.int64(0)
    hi = np.int64(G.deg[x])
    while lo < hi:
        mid = (lo + hi) >> 1
        if np.int64(G.nb_vtx[base + mid]) < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@dataclass
class FiltrationIndex:
    n: int
    eu: np.ndarray       # smaller endpoint per edge order
    ev: np.ndarray       # larger endpoint per edge order
    values: np.ndarray   # length per edge order, nondecreasing
    perm: np.ndarray     # position of each sorted edge in the input edge list
    deg: np.ndarray
    nb_ptr: np.ndarray
    nb_vtx: np.ndarray
    nb_ord: np.ndarray
    en_ptr: np.ndarray
    en_vtx: np.ndarray
    en_ord: np.ndarray
    min_cob: np.ndarray  # code of the smallest coface triangle per edge, -1 if none
    mode: str = "sparse"
    dense: Optional[np.ndarray] = None
    _graph: Optional[Graph] = field(default=None, repr=False)

    @property
    def n_edges(self) -> int:
        return int(self.eu.shape[0])

    def endpoints(self, order: int) -> tuple[int, int]:
        return int(self.eu[order]), int(self.ev[order])

    def edge_order(self, u: int, v: int) -> Optional[int]:
        u, v = int(u), int(v)
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            return None
        o = int(lookup(self.graph(), u, v))
        return None if o < 0 else o

    def vertex_neighborhood(self, x: int) -> list[tuple[int, int]]:
        s, d = int(self.nb_ptr[x]), int(self.deg[x])
        return list(zip(self.nb_vtx[s:s + d].tolist(), self.nb_ord[s:s + d].tolist()))

    def edge_neighborhood(self, x: int) -> list[tuple[int, int]]:
        s, d = int(self.en_ptr[x]), int(self.deg[x])
        return list(zip(self.en_vtx[s:s + d].tolist(), self.en_ord[s:s + d].tolist()))

    def value_of(self, order: int) -> float:
        return float(self.values[order])

    def min_coface(self, order: int):
        c = int(self.min_cob[order])
        return None if c < 0 else decode(c)

    def graph(self) -> Graph:
        if self._graph is None:
            use_dense = self.dense is not None
            dense = self.dense if use_dense else np.full((1, 1), -1, np.int32)
            self._graph = Graph(
                np.int64(self.n), np.int64(self.n_edges), self.eu, self.ev, self.deg,
                self.nb_ptr, self.nb_vtx, self.nb_ord, self.en_ptr, self.en_vtx,
                self.en_ord, self.min_cob, dense, use_dense,
            )
        return self._graph

    def with_min_cob(self, min_cob: np.ndarray) -> None:
        self.min_cob = min_cob
        self._graph = None


def memory_account(filt: FiltrationIndex) -> int:
    """Stored integers in the edge list and both neighborhoods (``12 n_e + 3 n``)."""
    f1 = filt.eu.size + filt.ev.size + filt.values.size + filt.perm.size
    lengths = filt.deg.size
    vertex_nbhd = filt.nb_vtx.size + filt.nb_ord.size + filt.nb_ptr.size
    edge_nbhd = filt.en_vtx.size + filt.en_ord.size + filt.en_ptr.size
    return int(f1 + lengths + vertex_nbhd + edge_nbhd)


def sort_edges(edges: EdgeList) -> np.ndarray:
    """Permutation sorting edges by ``(length, u, v)``."""
    return np.lexsort((edges.v, edges.u, edges.length))


def build_neighborhoods(n: int, eu: np.ndarray, ev: np.ndarray):
    n_e = eu.shape[0]
    orders = np.arange(n_e, dtype=np.uint32)
    src = np.concatenate((eu, ev))
    dst = np.concatenate((ev, eu))
    ords = np.concatenate((orders, orders))
    deg = np.bincount(src, minlength=n).astype(np.int64)
    ptr = np.zeros(n, dtype=np.int64)
    if n > 1:
        np.cumsum(deg[:-1], out=ptr[1:])
    by_vertex = np.lexsort((dst, src))
    by_edge = np.lexsort((ords, src))
    nb_vtx = dst[by_vertex].astype(np.uint32)
    nb_ord = ords[by_vertex]
    en_vtx = dst[by_edge].astype(np.uint32)
    en_ord = ords[by_edge]
    return deg, ptr, nb_vtx, nb_ord, ptr.copy(), en_vtx, en_ord


def build_filtration(edges: EdgeList, mode: str = "sparse",
                     dense_cap_bytes: int = DEFAULT_DENSE_CAP,
                     timings: Optional[dict] = None) -> FiltrationIndex:
    import time

    if mode not in ("sparse", "dense"):
        raise ValueError(f"unknown lookup mode {mode!r}")
    n = int(edges.n)
    check_capacity(n, len(edges))
    t0 = time.perf_counter()
    perm = sort_edges(edges).astype(np.int64)
    eu = edges.u[perm].astype(np.uint32)
    ev = edges.v[perm].astype(np.uint32)
    values = np.ascontiguousarray(edges.length[perm], dtype=np.float64)
    t1 = time.perf_counter()
    deg, nb_ptr, nb_vtx, nb_ord, en_ptr, en_vtx, en_ord = build_neighborhoods(n, eu, ev)
    dense = None
    if mode == "dense":
        need = 4 * n * n
        if need > dense_cap_bytes:
            raise ResourceRefusal(
                f"dense order table needs {need} bytes, above the cap of {dense_cap_bytes}")
        dense = np.full((n, n), -1, dtype=np.int32)
        o = np.arange(len(eu), dtype=np.int32)
        dense[eu, ev] = o
        dense[ev, eu] = o
    filt = FiltrationIndex(
        n, eu, ev, values, perm, deg, nb_ptr, nb_vtx, nb_ord, en_ptr, en_vtx, en_ord,
        np.full(len(eu), -1, dtype=np.int64), mode, dense,
    )
    from .cob_edge import all_min_cofaces

    filt.with_min_cob(all_min_cofaces(filt.graph()))
    t2 = time.perf_counter()
    if timings is not None:
        timings["filtration"] = t1 - t0
        timings["neighborhoods"] = t2 - t1
    return filt
