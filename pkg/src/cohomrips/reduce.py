"""Implicit coboundary column reduction over Z/2.

A column never materializes the coboundaries it sums.  It holds one cursor
entry per contributing generator, and the lowest simplex with odd
multiplicity across all cursors is the column's low.

Two engines share one column layout:

* ``fastcol`` groups entries by primary key.  Only the bucket holding the
  smallest primary key (the active bucket) is kept sorted; every other
  bucket is an unordered chain.  Two entries of the same generator at the
  same position cancel outright.
* ``row`` keeps a flat unsorted list and rescans it for the minimum at
  every step.

A column is a tuple ``(hdr, ent, keys, act, gens, ktab)`` of int64 arrays so
that it can live in numba containers and be passed between threads:

* ``hdr``  scalar bookkeeping (see the ``H_*`` offsets)
* ``ent``  entry pool, one row per cursor (``E_*`` offsets), with a free list
* ``keys`` non-active buckets: primary key, chain head, entry count
* ``act``  active bucket (fastcol, sorted from ``hdr[H_HS]``) or flat list (row)
* ``gens`` generators added to the column so far, excluding its owner
* ``ktab`` open-addressing index from primary key to ``keys`` row

The committed state (pairs plus the reduction operations that produced
them) is a similar tuple ``(shdr, tab, rec, ops)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from numba import njit

from .cob_edge import geq_t, next_t, smallest_t
from .cob_tri import geq_h, next_h, smallest_h, trivial_birth_tri
from .core import PairedIndex, decode, encode
from .filtration import FiltrationIndex

H_NKEYS, H_ACTIVE, H_HS, H_ALEN, H_FREE, H_USED, H_NGENS, H_DIM = 0, 1, 2, 3, 4, 5, 6, 7
H_OWNER, H_ROW, H_LIVE, H_MAXB, H_KBITS = 8, 9, 10, 11, 12
HDR_SIZE = 16
E_CODE, E_GEN, E_C0, E_C1, E_C2, E_FLAG, E_NEXT = 0, 1, 2, 3, 4, 5, 6
E_WIDTH = 7
K_PRIM, K_HEAD, K_CNT = 0, 1, 2

# outcome of reducing a column against the committed state
ZERO, FINAL, NEED_TRIVIAL, NEED_STORE, UNMARKED, NEW = 0, 1, 2, 3, 4, 5

S_NREC, S_NOPS, S_BITS = 0, 1, 2
R_LOW, R_BIRTH, R_START = 0, 1, 2

_GOLD = np.uint64(11400714819323198485)
_NO_CODE = np.int64(1) << 62
ENGINES = ("fastcol", "row")


@njit(cache=True, nogil=True)
def _hash(x, bits):
    return np.int64((np.uint64(x) * _GOLD) >> np.uint64(64 - bits))


@njit(cache=True, nogil=True)
def _bits_for(n):
    bits = 3
    while (np.int64(1) << bits) < 2 * n:
        bits += 1
    return bits


# ---------------------------------------------------------------- columns


@njit(cache=True, nogil=True)
def col_new(dim, owner, row, cap):
    cap = max(cap, 4)
    hdr = np.zeros(HDR_SIZE, np.int64)
    hdr[H_ACTIVE] = -1
    hdr[H_FREE] = -1
    hdr[H_DIM] = dim
    hdr[H_OWNER] = owner
    hdr[H_ROW] = row
    bits = _bits_for(cap)
    hdr[H_KBITS] = bits
    ent = np.empty((cap, E_WIDTH), np.int64)
    keys = np.empty((cap, 3), np.int64)
    act = np.empty(cap, np.int64)
    gens = np.empty(4, np.int64)
    ktab = np.full(np.int64(1) << bits, -1, np.int64)
    return (hdr, ent, keys, act, gens, ktab)


@njit(cache=True, nogil=True)
def _key_find(col, p):
    """(keys row or -1, table position)."""
    hdr, ent, keys, act, gens, ktab = col
    mask = ktab.shape[0] - 1
    h = _hash(p, hdr[H_KBITS])
    while True:
        s = ktab[h]
        if s < 0 or keys[s, K_PRIM] == p:
            return s, h
        h = (h + 1) & mask


@njit(cache=True, nogil=True)
def _key_unlink(col, pos):
    # backward-shift deletion keeps probe sequences intact
    hdr, ent, keys, act, gens, ktab = col
    mask = ktab.shape[0] - 1
    bits = hdr[H_KBITS]
    i = pos
    ktab[i] = -1
    j = i
    while True:
        j = (j + 1) & mask
        s = ktab[j]
        if s < 0:
            return
        home = _hash(keys[s, K_PRIM], bits)
        if j > i:
            move = home <= i or home > j
        else:
            move = home <= i and home > j
        if move:
            ktab[i] = s
            ktab[j] = -1
            i = j


@njit(cache=True, nogil=True)
def _grow(col):
    hdr, ent, keys, act, gens, ktab = col
    cap = ent.shape[0]
    ncap = 2 * cap
    ent2 = np.empty((ncap, E_WIDTH), np.int64)
    ent2[:cap] = ent
    keys2 = np.empty((ncap, 3), np.int64)
    keys2[:cap] = keys
    act2 = np.empty(ncap, np.int64)
    act2[:cap] = act
    bits = _bits_for(ncap)
    hdr[H_KBITS] = bits
    ktab2 = np.full(np.int64(1) << bits, -1, np.int64)
    mask = ktab2.shape[0] - 1
    for s in range(hdr[H_NKEYS]):
        h = _hash(keys2[s, K_PRIM], bits)
        while ktab2[h] >= 0:
            h = (h + 1) & mask
        ktab2[h] = s
    return (hdr, ent2, keys2, act2, gens, ktab2)


@njit(cache=True, nogil=True)
def _alloc(col):
    hdr = col[0]
    idx = hdr[H_FREE]
    if idx >= 0:
        hdr[H_FREE] = col[1][idx, E_NEXT]
    else:
        if hdr[H_USED] == col[1].shape[0]:
            col = _grow(col)
        idx = hdr[H_USED]
        hdr[H_USED] += 1
    hdr[H_LIVE] += 1
    return col, idx


@njit(cache=True, nogil=True)
def _free(col, idx):
    hdr, ent = col[0], col[1]
    ent[idx, E_CODE] = -1
    ent[idx, E_NEXT] = hdr[H_FREE]
    hdr[H_FREE] = idx
    hdr[H_LIVE] -= 1


@njit(cache=True, nogil=True)
def _before(ent, i, j):
    """Entry ``i`` sorts before entry ``j`` by (code, generator)."""
    ci = ent[i, E_CODE]
    cj = ent[j, E_CODE]
    return ci < cj or (ci == cj and ent[i, E_GEN] < ent[j, E_GEN])


@njit(cache=True, nogil=True)
def _chain_add(col, idx, p):
    hdr, ent, keys, act, gens, ktab = col
    s, pos = _key_find(col, p)
    if s < 0:
        s = hdr[H_NKEYS]
        hdr[H_NKEYS] += 1
        keys[s, K_PRIM] = p
        keys[s, K_HEAD] = -1
        keys[s, K_CNT] = 0
        ktab[pos] = s
        nb = hdr[H_NKEYS] + (1 if hdr[H_ACTIVE] >= 0 else 0)
        if nb > hdr[H_MAXB]:
            hdr[H_MAXB] = nb
    ent[idx, E_NEXT] = keys[s, K_HEAD]
    keys[s, K_HEAD] = idx
    keys[s, K_CNT] += 1


@njit(cache=True, nogil=True)
def _active_insert(col, idx):
    hdr, ent, keys, act, gens, ktab = col
    hs = hdr[H_HS]
    alen = hdr[H_ALEN]
    lo = hs
    hi = alen
    while lo < hi:
        mid = (lo + hi) >> 1
        if _before(ent, act[mid], idx):
            lo = mid + 1
        else:
            hi = mid
    if hs > 0:
        # reuse the consumed prefix instead of shifting the tail right
        for q in range(hs, lo):
            act[q - 1] = act[q]
        act[lo - 1] = idx
        hdr[H_HS] = hs - 1
    else:
        for q in range(alen, lo, -1):
            act[q] = act[q - 1]
        act[lo] = idx
        hdr[H_ALEN] = alen + 1


@njit(cache=True, nogil=True)
def _place(col, idx):
    hdr, ent, keys, act, gens, ktab = col
    if hdr[H_ROW]:
        act[hdr[H_ALEN]] = idx
        hdr[H_ALEN] += 1
        return
    p = ent[idx, E_CODE] >> 32
    active = hdr[H_ACTIVE]
    if active < 0:
        if hdr[H_NKEYS] == 0:
            hdr[H_ACTIVE] = p
            act[0] = idx
            hdr[H_HS] = 0
            hdr[H_ALEN] = 1
            if hdr[H_MAXB] < 1:
                hdr[H_MAXB] = 1
        else:
            _chain_add(col, idx, p)
    elif p == active:
        _active_insert(col, idx)
    elif p > active:
        _chain_add(col, idx, p)
    else:
        # a smaller key arrived: the active bucket becomes an ordinary chain
        for q in range(hdr[H_HS], hdr[H_ALEN]):
            _chain_add(col, act[q], active)
        hdr[H_ACTIVE] = p
        act[0] = idx
        hdr[H_HS] = 0
        hdr[H_ALEN] = 1


@njit(cache=True, nogil=True)
def _sort_active(col, n):
    hdr, ent, keys, act, gens, ktab = col
    if n <= 24:
        for i in range(1, n):
            x = act[i]
            j = i - 1
            while j >= 0 and _before(ent, x, act[j]):
                act[j + 1] = act[j]
                j -= 1
            act[j + 1] = x
        return
    seg = act[:n].copy()
    g = np.empty(n, np.int64)
    for i in range(n):
        g[i] = ent[seg[i], E_GEN]
    o1 = np.argsort(g, kind="mergesort")
    seg = seg[o1]
    c = np.empty(n, np.int64)
    for i in range(n):
        c[i] = ent[seg[i], E_CODE]
    o2 = np.argsort(c, kind="mergesort")
    act[:n] = seg[o2]


@njit(cache=True, nogil=True)
def _promote(col):
    hdr, ent, keys, act, gens, ktab = col
    nk = hdr[H_NKEYS]
    best = 0
    for s in range(1, nk):
        if keys[s, K_PRIM] < keys[best, K_PRIM]:
            best = s
    p = keys[best, K_PRIM]
    head = keys[best, K_HEAD]
    _, pos = _key_find(col, p)
    _key_unlink(col, pos)
    last = nk - 1
    if best != last:
        q = keys[last, K_PRIM]
        _, qpos = _key_find(col, q)
        keys[best, K_PRIM] = q
        keys[best, K_HEAD] = keys[last, K_HEAD]
        keys[best, K_CNT] = keys[last, K_CNT]
        ktab[qpos] = best
    hdr[H_NKEYS] = last
    n = 0
    idx = head
    while idx >= 0:
        act[n] = idx
        n += 1
        idx = ent[idx, E_NEXT]
    hdr[H_ACTIVE] = p
    hdr[H_HS] = 0
    hdr[H_ALEN] = n
    _sort_active(col, n)


@njit(cache=True, nogil=True)
def _step(G, col, idx):
    """Move entry ``idx`` to the next simplex of its coboundary; False if exhausted."""
    hdr, ent = col[0], col[1]
    if hdr[H_DIM] == 1:
        code, ia, ib = next_t(G, ent[idx, E_GEN], ent[idx, E_CODE], ent[idx, E_C0], ent[idx, E_C1])
        ent[idx, E_CODE] = code
        ent[idx, E_C0] = ia
        ent[idx, E_C1] = ib
    else:
        code, ia, ib, ic, fl = next_h(G, ent[idx, E_GEN], ent[idx, E_CODE], ent[idx, E_C0],
                                      ent[idx, E_C1], ent[idx, E_C2], ent[idx, E_FLAG])
        ent[idx, E_CODE] = code
        ent[idx, E_C0] = ia
        ent[idx, E_C1] = ib
        ent[idx, E_C2] = ic
        ent[idx, E_FLAG] = fl
    return code >= 0


@njit(cache=True, nogil=True)
def col_push(col, code, gen, c0, c1, c2, flag):
    col, idx = _alloc(col)
    ent = col[1]
    ent[idx, E_CODE] = code
    ent[idx, E_GEN] = gen
    ent[idx, E_C0] = c0
    ent[idx, E_C1] = c1
    ent[idx, E_C2] = c2
    ent[idx, E_FLAG] = flag
    _place(col, idx)
    return col


@njit(cache=True, nogil=True)
def col_push_geq(G, col, gen, target):
    """Add the part of ``gen``'s coboundary at or above ``target``."""
    if col[0][H_DIM] == 1:
        code, ia, ib = geq_t(G, gen, target)
        if code >= 0:
            col = col_push(col, code, gen, ia, ib, np.int64(0), np.int64(0))
    else:
        code, ia, ib, ic, fl = geq_h(G, gen, target)
        if code >= 0:
            col = col_push(col, code, gen, ia, ib, ic, fl)
    return col


@njit(cache=True, nogil=True)
def col_push_smallest(G, col, gen):
    if col[0][H_DIM] == 1:
        code, ia, ib = smallest_t(G, gen)
        if code >= 0:
            col = col_push(col, code, gen, ia, ib, np.int64(0), np.int64(0))
    else:
        code, ia, ib, ic, fl = smallest_h(G, gen)
        if code >= 0:
            col = col_push(col, code, gen, ia, ib, ic, fl)
    return col


@njit(cache=True, nogil=True)
def col_add_gen(col, g):
    hdr, ent, keys, act, gens, ktab = col
    n = hdr[H_NGENS]
    if n == gens.shape[0]:
        g2 = np.empty(2 * n, np.int64)
        g2[:n] = gens
        gens = g2
        col = (hdr, ent, keys, act, gens, ktab)
    gens[n] = g
    hdr[H_NGENS] = n + 1
    return col


@njit(cache=True, nogil=True)
def _low_fast(G, col):
    while True:
        hdr, ent, keys, act, gens, ktab = col
        hs = hdr[H_HS]
        alen = hdr[H_ALEN]
        if hs >= alen:
            hdr[H_ACTIVE] = -1
            hdr[H_HS] = 0
            hdr[H_ALEN] = 0
            if hdr[H_NKEYS] == 0:
                return -1
            _promote(col)
            continue
        code0 = ent[act[hs], E_CODE]
        r = hs + 1
        while r < alen and ent[act[r], E_CODE] == code0:
            r += 1
        # equal generators at equal positions have equal tails: drop both;
        # survivors are packed against the end of the run
        w = r - 1
        j = r - 1
        while j >= hs:
            if j > hs and ent[act[j], E_GEN] == ent[act[j - 1], E_GEN]:
                _free(col, act[j])
                _free(col, act[j - 1])
                j -= 2
            else:
                act[w] = act[j]
                w -= 1
                j -= 1
        s = r - 1 - w
        if s & 1:
            hdr[H_HS] = w + 1
            return code0
        hdr[H_HS] = r
        if s > 0:
            moving = act[w + 1:r].copy()
            for q in range(s):
                idx = moving[q]
                if _step(G, col, idx):
                    _place(col, idx)
                else:
                    _free(col, idx)


@njit(cache=True, nogil=True)
def _low_row(G, col):
    hdr, ent, keys, act, gens, ktab = col
    while True:
        alen = hdr[H_ALEN]
        if alen == 0:
            return -1
        m = _NO_CODE
        cnt = 0
        for i in range(alen):
            c = ent[act[i], E_CODE]
            if c < m:
                m = c
                cnt = 1
            elif c == m:
                cnt += 1
        if cnt & 1:
            return m
        i = 0
        while i < alen:
            idx = act[i]
            if ent[idx, E_CODE] == m:
                if not _step(G, col, idx):
                    _free(col, idx)
                    alen -= 1
                    act[i] = act[alen]
                    continue
            i += 1
        hdr[H_ALEN] = alen


@njit(cache=True, nogil=True)
def col_low(G, col):
    if col[0][H_ROW]:
        return _low_row(G, col)
    return _low_fast(G, col)


@njit(cache=True, nogil=True)
def col_live(col):
    """Indices of all live entries of the column."""
    hdr, ent, keys, act, gens, ktab = col
    out = np.empty(hdr[H_LIVE], np.int64)
    n = 0
    if hdr[H_ROW]:
        for q in range(hdr[H_ALEN]):
            out[n] = act[q]
            n += 1
        return out[:n]
    for q in range(hdr[H_HS], hdr[H_ALEN]):
        out[n] = act[q]
        n += 1
    for s in range(hdr[H_NKEYS]):
        idx = keys[s, K_HEAD]
        while idx >= 0:
            out[n] = idx
            n += 1
            idx = ent[idx, E_NEXT]
    return out[:n]


@njit(cache=True, nogil=True)
def col_merge(dst, src):
    """Add column ``src`` (already positioned) and its generators into ``dst``."""
    live = col_live(src)
    sent = src[1]
    for q in range(live.shape[0]):
        i = live[q]
        dst = col_push(dst, sent[i, E_CODE], sent[i, E_GEN], sent[i, E_C0], sent[i, E_C1],
                       sent[i, E_C2], sent[i, E_FLAG])
    dst = col_add_gen(dst, src[0][H_OWNER])
    sg = src[4]
    for q in range(src[0][H_NGENS]):
        dst = col_add_gen(dst, sg[q])
    return dst


@njit(cache=True, nogil=True)
def parity_compact(values, n):
    """Sorted values occurring an odd number of times among ``values[:n]``."""
    v = np.sort(values[:n])
    out = np.empty(n, np.int64)
    m = 0
    i = 0
    while i < n:
        j = i + 1
        while j < n and v[j] == v[i]:
            j += 1
        if (j - i) & 1:
            out[m] = v[i]
            m += 1
        i = j
    return out[:m]


# ------------------------------------------------------- committed state


@njit(cache=True, nogil=True)
def _table_bits(n):
    # keep the load factor of the open-addressing table at or below 0.7
    bits = 4
    while 7 * (np.int64(1) << bits) < 10 * n:
        bits += 1
    return bits


@njit(cache=True, nogil=True)
def store_new(cap):
    cap = max(cap, 8)
    shdr = np.zeros(4, np.int64)
    bits = _table_bits(cap)
    shdr[S_BITS] = bits
    tab = np.full(np.int64(1) << bits, -1, np.int32)
    rec = np.zeros((cap + 1, 3), np.int64)
    ops = np.empty(cap, np.int64)
    return (shdr, tab, rec, ops)


@njit(cache=True, nogil=True)
def store_find(store, low):
    shdr, tab, rec, ops = store
    mask = tab.shape[0] - 1
    h = _hash(low, shdr[S_BITS])
    while True:
        r = np.int64(tab[h])
        if r < 0:
            return r
        if rec[r, R_LOW] == low:
            return r
        h = (h + 1) & mask


@njit(cache=True, nogil=True)
def store_ops(store, r):
    """Slice bounds of record ``r``'s operations; records are laid out CSR-style."""
    rec = store[2]
    return rec[r, R_START], rec[r + 1, R_START]


@njit(cache=True, nogil=True)
def store_add(store, low, birth, opv):
    shdr, tab, rec, ops = store
    n = shdr[S_NREC]
    if n + 1 == rec.shape[0]:
        rec2 = np.empty((n + 1 + (n + 1) // 2, 3), np.int64)
        rec2[:n + 1] = rec
        rec = rec2
    if 7 * tab.shape[0] < 10 * (n + 1):
        bits = _table_bits(n + 1)
        shdr[S_BITS] = bits
        tab = np.full(np.int64(1) << bits, -1, np.int32)
        mask = tab.shape[0] - 1
        for r in range(n):
            h = _hash(rec[r, R_LOW], bits)
            while tab[h] >= 0:
                h = (h + 1) & mask
            tab[h] = r
    m = opv.shape[0]
    no = shdr[S_NOPS]
    if no + m > ops.shape[0]:
        cap = max(ops.shape[0] + ops.shape[0] // 2, no + m)
        ops2 = np.empty(cap, np.int64)
        ops2[:no] = ops[:no]
        ops = ops2
    ops[no:no + m] = opv
    rec[n, R_LOW] = low
    rec[n, R_BIRTH] = birth
    rec[n, R_START] = no
    rec[n + 1, R_START] = no + m
    mask = tab.shape[0] - 1
    h = _hash(low, shdr[S_BITS])
    while tab[h] >= 0:
        h = (h + 1) & mask
    tab[h] = n
    shdr[S_NREC] = n + 1
    shdr[S_NOPS] = no + m
    return (shdr, tab, rec, ops)


# -------------------------------------------------------------- reduction


@njit(cache=True, nogil=True)
def trivial_birth(G, dim, low):
    """Simplex whose smallest coface is ``low`` and is ``low``'s largest facet, or -1."""
    if dim == 1:
        k1 = low >> 32
        if G.min_cob[k1] == low:
            return k1
        return np.int64(-1)
    return trivial_birth_tri(G, low)


@njit(cache=True, nogil=True)
def reduce_committed(G, col, store):
    """Reduce against trivial pairs and the committed store until the low is free.

    Returns ``(col, state, low)`` with ``state`` ZERO or FINAL.
    """
    dim = col[0][H_DIM]
    owner = col[0][H_OWNER]
    while True:
        low = col_low(G, col)
        if low < 0:
            return col, ZERO, low
        b = trivial_birth(G, dim, low)
        if b >= 0:
            if b == owner:
                return col, FINAL, low
            col = col_push_geq(G, col, b, low)
            col = col_add_gen(col, b)
            continue
        r = store_find(store, low)
        if r < 0:
            return col, FINAL, low
        rec, ops = store[2], store[3]
        birth = rec[r, R_BIRTH]
        col = col_push_geq(G, col, birth, low)
        col = col_add_gen(col, birth)
        lo, hi = store_ops(store, r)
        for q in range(lo, hi):
            col = col_push_geq(G, col, ops[q], low)
            col = col_add_gen(col, ops[q])


@njit(cache=True, nogil=True)
def column_ops(col):
    return parity_compact(col[4], col[0][H_NGENS])


@njit(cache=True, nogil=True)
def commit(store, col, low):
    return store_add(store, low, col[0][H_OWNER], column_ops(col))


# ---------------------------------------------------------- Python layer


def _dim_of(simplex) -> int:
    return 2 if isinstance(simplex, tuple) else 1


def _gen_id(simplex) -> int:
    return encode(*simplex) if isinstance(simplex, tuple) else int(simplex)


def _from_id(gen: int, dim: int):
    return int(gen) if dim == 1 else decode(gen)


class CommittedStore:
    """Pairs found so far and the reduction operations behind each of them."""

    def __init__(self, dim: int, capacity: int = 64):
        self.dim = dim
        self.data = store_new(capacity)

    def __len__(self) -> int:
        return int(self.data[0][S_NREC])

    def add(self, low: PairedIndex, birth, ops: Sequence = ()) -> None:
        opv = np.array([_gen_id(o) for o in ops], dtype=np.int64)
        self.data = store_add(self.data, np.int64(encode(*low)), np.int64(_gen_id(birth)), opv)

    def find(self, low: PairedIndex):
        """``(birth, ops)`` for a stored low, or None."""
        r = int(store_find(self.data, np.int64(encode(*low))))
        if r < 0:
            return None
        rec, ops = self.data[2], self.data[3]
        lo, hi = store_ops(self.data, r)
        return (_from_id(rec[r, R_BIRTH], self.dim),
                [_from_id(x, self.dim) for x in ops[lo:hi]])

    def pairs(self) -> dict:
        rec = self.data[2][: len(self)]
        return {decode(int(lo)): _from_id(b, self.dim) for lo, b in rec[:, :2]}


class ReductionColumn:
    """A coboundary column over one engine; entries are cursors into coboundaries."""

    def __init__(self, filt: FiltrationIndex, dim: int, owner=-1, engine: str = "fastcol"):
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}")
        self.filt = filt
        self.dim = dim
        self.engine = engine
        self.data = col_new(dim, np.int64(_gen_id(owner) if owner != -1 else -1),
                            np.int64(engine == "row"), 8)

    @property
    def active_key(self) -> Optional[int]:
        a = int(self.data[0][H_ACTIVE])
        return None if a < 0 else a

    @property
    def keys(self) -> set[int]:
        hdr, keys = self.data[0], self.data[2]
        out = {int(k) for k in keys[: hdr[H_NKEYS], K_PRIM]}
        if self.active_key is not None and hdr[H_HS] < hdr[H_ALEN]:
            out.add(self.active_key)
        return out

    def active_bucket(self) -> list[PairedIndex]:
        hdr, ent, act = self.data[0], self.data[1], self.data[3]
        return [decode(int(ent[i, E_CODE])) for i in act[hdr[H_HS]:hdr[H_ALEN]]]

    def bucket(self, primary: int) -> list[PairedIndex]:
        if primary == self.active_key:
            return self.active_bucket()
        hdr, ent, keys = self.data[0], self.data[1], self.data[2]
        for s in range(int(hdr[H_NKEYS])):
            if keys[s, K_PRIM] == primary:
                out, idx = [], int(keys[s, K_HEAD])
                while idx >= 0:
                    out.append(decode(int(ent[idx, E_CODE])))
                    idx = int(ent[idx, E_NEXT])
                return out[::-1]
        return []

    def entries(self) -> list[tuple[PairedIndex, int]]:
        ent = self.data[1]
        return sorted((decode(int(ent[i, E_CODE])), int(ent[i, E_GEN]))
                      for i in col_live(self.data))

    @property
    def max_buckets(self) -> int:
        return int(self.data[0][H_MAXB])

    @property
    def generators(self) -> list[int]:
        return [int(g) for g in column_ops(self.data)]


def hash_insert(col: ReductionColumn, entry) -> ReductionColumn:
    """Insert a cursor entry.

    ``entry`` is a coboundary cursor (``PhiRepEdge``/``PhiRepTri``) or a bare
    ``(PairedIndex, generator)`` pair, the latter never advancing past its
    position meaningfully and meant for layout inspection.
    """
    if hasattr(entry, "current"):
        if entry.current is None:
            return col
        code = encode(*entry.current)
        if hasattr(entry, "tri"):
            gen = encode(*entry.tri)
            c = (entry.i_a, entry.i_b, entry.i_e, entry.flag)
        else:
            gen = entry.edge
            c = (entry.i_a, entry.i_b, 0, 0)
    else:
        pidx, gen = entry
        code = encode(*pidx)
        gen = _gen_id(gen)
        c = (0, 0, 0, 0)
    col.data = col_push(col.data, np.int64(code), np.int64(gen), *(np.int64(x) for x in c))
    return col


def push_geq(col: ReductionColumn, gen, target: PairedIndex) -> ReductionColumn:
    col.data = col_push_geq(col.filt.graph(), col.data, np.int64(_gen_id(gen)),
                            np.int64(encode(*target)))
    return col


def column_low(col: ReductionColumn) -> Optional[PairedIndex]:
    low = int(col_low(col.filt.graph(), col.data))
    return None if low < 0 else decode(low)


def is_trivial_pair(filt: FiltrationIndex, low: PairedIndex, dim: int):
    """Birth simplex structurally paired with ``low`` (edge order or triangle), or None."""
    b = int(trivial_birth(filt.graph(), np.int64(dim), np.int64(encode(*low))))
    if b < 0:
        return None
    return _from_id(b, dim)


@dataclass(frozen=True)
class Outcome:
    kind: str                      # "paired" or "zero"
    low: Optional[PairedIndex]
    ops: tuple

    @property
    def paired(self) -> bool:
        return self.kind == "paired"


def reduce_one(filt: FiltrationIndex, simplex: Union[int, PairedIndex],
               store: CommittedStore, engine: str = "fastcol", commit_result: bool = False) -> Outcome:
    """Reduce the coboundary column of ``simplex`` against ``store``.

    Every strictly later simplex of the same dimension must already have
    been reduced and its nontrivial pair committed.
    """
    dim = _dim_of(simplex)
    gen = np.int64(_gen_id(simplex))
    G = filt.graph()
    col = col_new(dim, gen, np.int64(engine == "row"), 8)
    col = col_push_smallest(G, col, gen)
    col, state, low = reduce_committed(G, col, store.data)
    ops = tuple(_from_id(g, dim) for g in column_ops(col))
    if state == ZERO:
        return Outcome("zero", None, ops)
    if commit_result and int(trivial_birth(G, np.int64(dim), low)) < 0:
        store.data = commit(store.data, col, low)
    return Outcome("paired", decode(int(low)), ops)


def reduce_one_rowvariant(filt: FiltrationIndex, simplex, store: CommittedStore,
                          commit_result: bool = False) -> Outcome:
    return reduce_one(filt, simplex, store, engine="row", commit_result=commit_result)
