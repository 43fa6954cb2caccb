"""Coboundary of an edge, enumerated lazily in filtration order.

For an edge ``k = (a, b)`` the triangles ``{a, b, c}`` split in two groups:

* diameter ``k`` itself: both ``ac`` and ``bc`` precede ``k``.  These come
  first, ordered by apex ``c``; found by merging the vertex-neighborhoods
  of ``a`` and ``b``.
* diameter ``m > k``: walk the edge-neighborhoods of ``a`` and ``b`` above
  ``k`` in order and keep edges ``(x, c)`` whose third side exists and is
  shorter than ``m``.

A cursor state is ``(code, ia, ib)``; ``code`` is -1 once exhausted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from numba import njit

from .core import PairedIndex, decode, encode
from .filtration import FiltrationIndex, lb_edge, lb_vertex, lookup

_BIG = np.int64(1) << 62


@njit(cache=True, nogil=True)
def _case1(G, k, a, b, ia, ib):
    pa = G.nb_ptr[a]
    pb = G.nb_ptr[b]
    da = G.deg[a]
    db = G.deg[b]
    while ia < da and ib < db:
        x = np.int64(G.nb_vtx[pa + ia])
        y = np.int64(G.nb_vtx[pb + ib])
        if x < y:
            ia += 1
        elif x > y:
            ib += 1
        else:
            if np.int64(G.nb_ord[pa + ia]) < k and np.int64(G.nb_ord[pb + ib]) < k:
                return (k << 32) | x, ia, ib
            ia += 1
            ib += 1
    return np.int64(-1), ia, ib


@njit(cache=True, nogil=True)
def _case2(G, a, b, ia, ib):
    pa = G.en_ptr[a]
    pb = G.en_ptr[b]
    da = G.deg[a]
    db = G.deg[b]
    while ia < da or ib < db:
        oa = np.int64(G.en_ord[pa + ia]) if ia < da else _BIG
        ob = np.int64(G.en_ord[pb + ib]) if ib < db else _BIG
        if oa < ob:
            o = lookup(G, b, np.int64(G.en_vtx[pa + ia]))
            if o >= 0 and o < oa:
                return (oa << 32) | b, ia, ib
            ia += 1
        else:
            o = lookup(G, a, np.int64(G.en_vtx[pb + ib]))
            if o >= 0 and o < ob:
                return (ob << 32) | a, ia, ib
            ib += 1
    return np.int64(-1), ia, ib


@njit(cache=True, nogil=True)
def _case2_from(G, a, b, k):
    return _case2(G, a, b, lb_edge(G, a, k), lb_edge(G, b, k))


@njit(cache=True, nogil=True)
def smallest_t(G, k):
    a = np.int64(G.eu[k])
    b = np.int64(G.ev[k])
    code, ia, ib = _case1(G, k, a, b, np.int64(0), np.int64(0))
    if code >= 0:
        return code, ia, ib
    return _case2_from(G, a, b, k + 1)


@njit(cache=True, nogil=True)
def next_t(G, k, code, ia, ib):
    a = np.int64(G.eu[k])
    b = np.int64(G.ev[k])
    if (code >> 32) == k:
        code, ia, ib = _case1(G, k, a, b, ia + 1, ib + 1)
        if code >= 0:
            return code, ia, ib
        return _case2_from(G, a, b, k + 1)
    # the cursor that produced the current triangle is the one whose
    # vertex is not the apex
    if (code & 0xFFFFFFFF) == b:
        ia += 1
    else:
        ib += 1
    return _case2(G, a, b, ia, ib)


@njit(cache=True, nogil=True)
def geq_t(G, k, target):
    k1 = target >> 32
    if k1 < k:
        return smallest_t(G, k)
    a = np.int64(G.eu[k])
    b = np.int64(G.ev[k])
    if k1 == k:
        k2 = target & 0xFFFFFFFF
        code, ia, ib = _case1(G, k, a, b, lb_vertex(G, a, k2), lb_vertex(G, b, k2))
        if code >= 0:
            return code, ia, ib
        return _case2_from(G, a, b, k + 1)
    code, ia, ib = _case2_from(G, a, b, k1)
    if code >= 0 and code < target:
        return next_t(G, k, code, ia, ib)
    return code, ia, ib


@njit(cache=True, nogil=True)
def all_min_cofaces(G):
    out = np.empty(G.n_e, dtype=np.int64)
    for k in range(G.n_e):
        out[k] = smallest_t(G, np.int64(k))[0]
    return out


@dataclass(frozen=True)
class PhiRepEdge:
    """Resumable position in the coboundary of ``edge``."""

    edge: int
    i_a: int
    i_b: int
    current: Optional[PairedIndex]

    @property
    def in_case1(self) -> bool:
        return self.current is not None and self.current.primary == self.edge


def _wrap(edge: int, state) -> PhiRepEdge:
    code, ia, ib = (int(x) for x in state)
    return PhiRepEdge(edge, ia, ib, None if code < 0 else decode(code))


def find_smallest_t(filt: FiltrationIndex, edge: int) -> PhiRepEdge:
    return _wrap(edge, smallest_t(filt.graph(), np.int64(edge)))


def find_next_t(filt: FiltrationIndex, phi: PhiRepEdge) -> PhiRepEdge:
    if phi.current is None:
        raise ValueError("cursor already exhausted")
    st = next_t(filt.graph(), np.int64(phi.edge), np.int64(phi.current.code()),
                np.int64(phi.i_a), np.int64(phi.i_b))
    return _wrap(phi.edge, st)


def find_geq_t(filt: FiltrationIndex, edge: int, target: PairedIndex) -> PhiRepEdge:
    code = encode(*target)
    return _wrap(edge, geq_t(filt.graph(), np.int64(edge), np.int64(code)))


def edge_coboundary(filt: FiltrationIndex, edge: int) -> Iterator[PairedIndex]:
    phi = find_smallest_t(filt, edge)
    while phi.current is not None:
        yield phi.current
        phi = find_next_t(filt, phi)
