"""Coboundary of a triangle, enumerated lazily in filtration order.

A triangle ``<k, c>`` has diameter edge ``k = (a, b)`` and apex ``c``.  Its
tetrahedra ``{a, b, c, d}`` come in two groups:

* diameter ``k``: ``ad``, ``bd`` and ``cd`` all precede ``k``.  The paired
  index is ``<k, order(cd)>``, so these are found by walking the
  edge-neighborhood of ``c`` below ``k``.
* diameter ``m > k``: three cursors walk the edge-neighborhoods of ``a``,
  ``b``, ``c`` above ``k``; the smallest current edge is the candidate
  diameter and the two remaining sides must exist and precede it.

A cursor state is ``(code, ia, ib, ic, flag)`` where ``flag`` is 0 for the
first group and 1/2/3 when the diameter sits at cursor ``ia``/``ib``/``ic``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from numba import njit

from .core import PairedIndex, decode, encode
from .filtration import FiltrationIndex, lb_edge, lookup

_BIG = np.int64(1) << 62
_Z = np.int64(0)


@njit(cache=True, nogil=True)
def _case1(G, k, a, b, c, ic):
    pc = G.en_ptr[c]
    dc = G.deg[c]
    while ic < dc:
        m = np.int64(G.en_ord[pc + ic])
        if m >= k:
            break
        d = np.int64(G.en_vtx[pc + ic])
        if d != a and d != b:
            o = lookup(G, a, d)
            if o >= 0 and o < k:
                o = lookup(G, b, d)
                if o >= 0 and o < k:
                    return (k << 32) | m, ic
        ic += 1
    return np.int64(-1), ic


@njit(cache=True, nogil=True)
def _case2(G, k, a, b, c, ia, ib, ic):
    pa = G.en_ptr[a]
    pb = G.en_ptr[b]
    pc = G.en_ptr[c]
    da = G.deg[a]
    db = G.deg[b]
    dc = G.deg[c]
    while True:
        oa = np.int64(G.en_ord[pa + ia]) if ia < da else _BIG
        ob = np.int64(G.en_ord[pb + ib]) if ib < db else _BIG
        oc = np.int64(G.en_ord[pc + ic]) if ic < dc else _BIG
        if oa == _BIG and ob == _BIG and oc == _BIG:
            return np.int64(-1), ia, ib, ic, _Z
        if oa < ob and oa < oc:
            d = np.int64(G.en_vtx[pa + ia])
            o = lookup(G, b, d)
            if o >= 0 and o < oa:
                o = lookup(G, c, d)
                if o >= 0 and o < oa:
                    return (oa << 32) | lookup(G, b, c), ia, ib, ic, np.int64(1)
            ia += 1
        elif ob < oc:
            d = np.int64(G.en_vtx[pb + ib])
            o = lookup(G, a, d)
            if o >= 0 and o < ob:
                o = lookup(G, c, d)
                if o >= 0 and o < ob:
                    return (ob << 32) | lookup(G, a, c), ia, ib, ic, np.int64(2)
            ib += 1
        else:
            d = np.int64(G.en_vtx[pc + ic])
            o = lookup(G, a, d)
            if o >= 0 and o < oc:
                o = lookup(G, b, d)
                if o >= 0 and o < oc:
                    return (oc << 32) | k, ia, ib, ic, np.int64(3)
            ic += 1


@njit(cache=True, nogil=True)
def _case2_from(G, k, a, b, c, lo):
    return _case2(G, k, a, b, c, lb_edge(G, a, lo), lb_edge(G, b, lo), lb_edge(G, c, lo))


@njit(cache=True, nogil=True)
def _verts(G, t):
    k = t >> 32
    return k, np.int64(G.eu[k]), np.int64(G.ev[k]), t & 0xFFFFFFFF


@njit(cache=True, nogil=True)
def smallest_h(G, t):
    k, a, b, c = _verts(G, t)
    code, ic = _case1(G, k, a, b, c, _Z)
    if code >= 0:
        return code, _Z, _Z, ic, _Z
    return _case2_from(G, k, a, b, c, k + 1)


@njit(cache=True, nogil=True)
def next_h(G, t, code, ia, ib, ic, flag):
    k, a, b, c = _verts(G, t)
    if flag == 0:
        code, ic = _case1(G, k, a, b, c, ic + 1)
        if code >= 0:
            return code, ia, ib, ic, _Z
        return _case2_from(G, k, a, b, c, k + 1)
    if flag == 1:
        ia += 1
    elif flag == 2:
        ib += 1
    else:
        ic += 1
    return _case2(G, k, a, b, c, ia, ib, ic)


@njit(cache=True, nogil=True)
def geq_h(G, t, target):
    k, a, b, c = _verts(G, t)
    k1 = target >> 32
    if k1 < k:
        return smallest_h(G, t)
    if k1 == k:
        code, ic = _case1(G, k, a, b, c, lb_edge(G, c, target & 0xFFFFFFFF))
        if code >= 0:
            return code, _Z, _Z, ic, _Z
        return _case2_from(G, k, a, b, c, k + 1)
    code, ia, ib, ic, flag = _case2_from(G, k, a, b, c, k1)
    if code >= 0 and code < target:
        return next_h(G, t, code, ia, ib, ic, flag)
    return code, ia, ib, ic, flag


@njit(cache=True, nogil=True)
def trivial_birth_tri(G, low):
    """Triangle paired structurally with tetrahedron ``low``, or -1.

    The candidate is ``<k1, larger endpoint of k2>``; it qualifies when
    ``low`` is the first tetrahedron of its coboundary, i.e. when no valid
    tetrahedron turns up earlier in the apex's edge-neighborhood.
    """
    k1 = low >> 32
    d = np.int64(G.ev[low & 0xFFFFFFFF])
    code, _ = _case1(G, k1, np.int64(G.eu[k1]), np.int64(G.ev[k1]), d, _Z)
    if code == low:
        return (k1 << 32) | d
    return np.int64(-1)


@dataclass(frozen=True)
class PhiRepTri:
    """Resumable position in the coboundary of triangle ``tri``."""

    tri: PairedIndex
    i_a: int
    i_b: int
    i_e: int
    flag: int
    current: Optional[PairedIndex]


def _wrap(tri: PairedIndex, state) -> PhiRepTri:
    code, ia, ib, ic, flag = (int(x) for x in state)
    return PhiRepTri(PairedIndex(*tri), ia, ib, ic, flag, None if code < 0 else decode(code))


def find_smallest_h(filt: FiltrationIndex, tri: PairedIndex) -> PhiRepTri:
    return _wrap(tri, smallest_h(filt.graph(), np.int64(encode(*tri))))


def find_next_h(filt: FiltrationIndex, phi: PhiRepTri) -> PhiRepTri:
    if phi.current is None:
        raise ValueError("cursor already exhausted")
    st = next_h(filt.graph(), np.int64(phi.tri.code()), np.int64(phi.current.code()),
                np.int64(phi.i_a), np.int64(phi.i_b), np.int64(phi.i_e), np.int64(phi.flag))
    return _wrap(phi.tri, st)


def find_geq_h(filt: FiltrationIndex, tri: PairedIndex, target: PairedIndex) -> PhiRepTri:
    st = geq_h(filt.graph(), np.int64(encode(*tri)), np.int64(encode(*target)))
    return _wrap(tri, st)


def is_trivial_tri(filt: FiltrationIndex, low: PairedIndex) -> Optional[PairedIndex]:
    c = int(trivial_birth_tri(filt.graph(), np.int64(encode(*low))))
    return None if c < 0 else decode(c)


def triangle_coboundary(filt: FiltrationIndex, tri: PairedIndex) -> Iterator[PairedIndex]:
    phi = find_smallest_h(filt, tri)
    while phi.current is not None:
        yield phi.current
        phi = find_next_h(filt, phi)
