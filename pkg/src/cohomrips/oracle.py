"""Brute-force reference: explicit boundary matrices reduced over Z/2.

All simplices up to dimension 3 are listed and sorted by (value, dimension,
vertex tuple).  Columns are Python integers used as bit sets.  Three
reductions are offered: the standard column algorithm, the row algorithm,
and the column algorithm on the anti-transposed (coboundary) matrix.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Union

from .core import ResourceRefusal
from .filtration import FiltrationIndex
from .ingest import EdgeList

DEFAULT_CAP = 25
INF = math.inf


@dataclass
class DenseFiltration:
    n: int
    simplices: list      # vertex tuples in filtration order
    values: list
    dims: list
    columns: list        # boundary columns as bit sets over simplex positions

    def __len__(self) -> int:
        return len(self.simplices)

    def count_by_dim(self) -> dict:
        out: dict = defaultdict(int)
        for d in self.dims:
            out[d] += 1
        return dict(out)


def _edge_lengths(source: Union[EdgeList, FiltrationIndex]):
    if isinstance(source, FiltrationIndex):
        us, vs, ls = source.eu, source.ev, source.values
    else:
        us, vs, ls = source.u, source.v, source.length
    return int(source.n), {(int(a), int(b)): float(d) for a, b, d in zip(us, vs, ls)}


def oracle_enumerate(source: Union[EdgeList, FiltrationIndex], cap: int = DEFAULT_CAP,
                     maxdim: int = 3) -> DenseFiltration:
    n, length = _edge_lengths(source)
    if n > cap:
        raise ResourceRefusal(f"oracle refuses {n} points (cap is {cap})")
    adj = defaultdict(set)
    for a, b in length:
        adj[a].add(b)
        adj[b].add(a)
    found = [((v,), 0.0) for v in range(n)]
    found += [((a, b), d) for (a, b), d in length.items()]
    level = [tuple(e) for e in length]
    for _ in range(2, maxdim + 1):
        nxt = []
        for s in level:
            for w in set.intersection(*(adj[x] for x in s)):
                if w > s[-1]:
                    nxt.append(s + (w,))
        level = nxt
        for s in level:
            found.append((s, max(length[p] for p in combinations(s, 2))))
    found.sort(key=lambda sv: (sv[1], len(sv[0]), sv[0]))
    pos = {s: i for i, (s, _) in enumerate(found)}
    columns = []
    for s, _ in found:
        col = 0
        if len(s) > 1:
            for face in combinations(s, len(s) - 1):
                col |= 1 << pos[face]
        columns.append(col)
    return DenseFiltration(n, [s for s, _ in found], [v for _, v in found],
                           [len(s) - 1 for s, _ in found], columns)


def _diagrams(D: DenseFiltration, pairs, essentials, maxdim: int = 2) -> dict:
    out = {d: [] for d in range(maxdim + 1)}
    for birth, death in pairs:
        d = D.dims[birth]
        if d <= maxdim:
            out[d].append((D.values[birth], D.values[death]))
    for birth in essentials:
        d = D.dims[birth]
        if d <= maxdim:
            out[d].append((D.values[birth], INF))
    for d in out:
        out[d].sort(key=lambda p: (p[1] == INF, p[0], p[1]))
    return out


def _essentials(m: int, zero, paired) -> list:
    return [j for j in range(m) if zero[j] and j not in paired]


def oracle_reduce_column(D: DenseFiltration, maxdim: int = 2) -> dict:
    """Standard left-to-right column reduction; pairs are ``(low(j), j)``."""
    m = len(D)
    pivot_of: dict = {}
    cols = list(D.columns)
    pairs = []
    for j in range(m):
        c = cols[j]
        while c:
            low = c.bit_length() - 1
            k = pivot_of.get(low)
            if k is None:
                break
            c ^= cols[k]
        cols[j] = c
        if c:
            low = c.bit_length() - 1
            pivot_of[low] = j
            pairs.append((low, j))
    paired = {p for pr in pairs for p in pr}
    return _diagrams(D, pairs, _essentials(m, [c == 0 for c in cols], paired), maxdim)


def oracle_reduce_row(D: DenseFiltration, maxdim: int = 2) -> dict:
    """Row algorithm: sweep rows bottom-up, clearing each with its leftmost pivot."""
    m = len(D)
    cols = list(D.columns)
    by_low = defaultdict(list)
    for j, c in enumerate(cols):
        if c:
            by_low[c.bit_length() - 1].append(j)
    pairs = []
    for i in range(m - 1, -1, -1):
        owners = by_low.pop(i, None)
        if not owners:
            continue
        piv = min(owners)
        pairs.append((i, piv))
        for j in owners:
            if j == piv:
                continue
            cols[j] ^= cols[piv]
            if cols[j]:
                by_low[cols[j].bit_length() - 1].append(j)
    paired = {p for pr in pairs for p in pr}
    return _diagrams(D, pairs, _essentials(m, [c == 0 for c in cols], paired), maxdim)


def oracle_reduce_cohomology(D: DenseFiltration, maxdim: int = 2) -> dict:
    """Column reduction of the anti-transposed matrix (coboundaries, reversed order).

    The column of simplex ``j`` lists its cofaces; after reduction its
    smallest coface is the death paired with ``j``.
    """
    m = len(D)
    cob = [0] * m
    for j, c in enumerate(D.columns):
        while c:
            b = c & -c
            cob[b.bit_length() - 1] |= 1 << j
            c ^= b
    pivot_of: dict = {}
    pairs = []
    for j in range(m - 1, -1, -1):
        c = cob[j]
        while c:
            low = (c & -c).bit_length() - 1
            k = pivot_of.get(low)
            if k is None:
                break
            c ^= cob[k]
        cob[j] = c
        if c:
            low = (c & -c).bit_length() - 1
            pivot_of[low] = j
            pairs.append((j, low))
    paired = {p for pr in pairs for p in pr}
    return _diagrams(D, pairs, _essentials(m, [c == 0 for c in cob], paired), maxdim)


def drop_zero(diagrams: dict) -> dict:
    return {d: [p for p in pairs if p[0] != p[1]] for d, pairs in diagrams.items()}


def pair_counts(diagrams: dict) -> dict:
    """Finite pairs per dimension, zero-persistence ones included."""
    return {d: sum(1 for p in pairs if p[1] != INF) for d, pairs in diagrams.items()}
