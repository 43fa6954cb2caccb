"""Serial-parallel batch reduction.

A batch holds up to ``B`` columns taken from the work stream in order.  Each
round runs three phases:

1. parallel: every column is reduced on its own against the committed
   state (trivial pairs and stored pairs), which is read-only meanwhile;
2. serial: columns are compared with the earlier columns of the batch and
   merged when their lows coincide;
3. clearance: finished columns are committed or reported as zero, and the
   survivors move to the front for the next round.

The earliest column in the batch always finishes, so every round makes
progress.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit
from numba.typed import List

from .reduce import (
    FINAL, H_DIM, H_OWNER, NEED_STORE, NEED_TRIVIAL, NEW, UNMARKED, ZERO,
    col_low, col_merge, col_new, commit, reduce_committed, store_find, trivial_birth,
)

# output record: header counters plus growable pair / essential / trivial lists
O_PAIRS, O_ESS, O_TRIV, O_TRIV_SEEN, O_VISITED, O_CLEARED, O_ZERO_SKIPPED = 0, 1, 2, 3, 4, 5, 6

STATE_NAMES = {ZERO: "zero", FINAL: "final", NEED_TRIVIAL: "needs-trivial",
               NEED_STORE: "needs-store", UNMARKED: "unmarked", NEW: "new"}


@dataclass(frozen=True)
class BatchConfig:
    batch_dim1: int = 1000
    batch_dim2: int = 100
    threads: int = 1

    def __post_init__(self):
        if self.batch_dim1 < 1 or self.batch_dim2 < 1:
            raise ValueError("batch sizes must be at least 1")
        if self.threads < 1:
            raise ValueError("thread count must be at least 1")

    def batch_size(self, dim: int) -> int:
        return self.batch_dim1 if dim == 1 else self.batch_dim2


@njit(cache=True)
def empty_columns():
    cols = List()
    cols.append(col_new(np.int64(1), np.int64(0), np.int64(0), np.int64(4)))
    cols.pop()
    return cols


@njit(cache=True, nogil=True)
def out_new(cap):
    return (np.zeros(8, np.int64), np.empty((cap, 2), np.int64),
            np.empty(cap, np.int64), np.empty((cap, 2), np.int64))


@njit(cache=True, nogil=True)
def _grow2(a):
    b = np.empty((a.shape[0] + a.shape[0] // 2 + 1, a.shape[1]), np.int64)
    b[:a.shape[0]] = a
    return b


@njit(cache=True, nogil=True)
def out_pair(out, birth, death):
    ohdr, pairs, ess, triv = out
    n = ohdr[O_PAIRS]
    if n == pairs.shape[0]:
        pairs = _grow2(pairs)
    pairs[n, 0] = birth
    pairs[n, 1] = death
    ohdr[O_PAIRS] = n + 1
    return (ohdr, pairs, ess, triv)


@njit(cache=True, nogil=True)
def out_essential(out, birth):
    ohdr, pairs, ess, triv = out
    n = ohdr[O_ESS]
    if n == ess.shape[0]:
        e2 = np.empty(n + n // 2 + 1, np.int64)
        e2[:n] = ess
        ess = e2
    ess[n] = birth
    ohdr[O_ESS] = n + 1
    return (ohdr, pairs, ess, triv)


@njit(cache=True, nogil=True)
def out_trivial(out, birth, death, record):
    ohdr, pairs, ess, triv = out
    ohdr[O_TRIV_SEEN] += 1
    if not record:
        return out
    n = ohdr[O_TRIV]
    if n == triv.shape[0]:
        triv = _grow2(triv)
    triv[n, 0] = birth
    triv[n, 1] = death
    ohdr[O_TRIV] = n + 1
    return (ohdr, pairs, ess, triv)


@njit(cache=True, nogil=True)
def reduce_range(G, cols, state, lows, lo, hi, store):
    for i in range(lo, hi):
        col, st, low = reduce_committed(G, cols[i], store)
        cols[i] = col
        state[i] = st
        lows[i] = low


@njit(cache=True, nogil=True)
def serial_sweep(G, cols, state, lows, n, store):
    """Resolve equal lows inside the batch; returns the number of merges."""
    merges = 0
    for i in range(n):
        if state[i] != FINAL:
            continue
        j = 0
        while j < i:
            sj = state[j]
            if sj == ZERO or lows[j] > lows[i]:
                j += 1
                continue
            if sj != FINAL:
                # an unfinished earlier column may still reach this low
                state[i] = UNMARKED
                break
            if lows[j] == lows[i]:
                col = col_merge(cols[i], cols[j])
                low = col_low(G, col)
                cols[i] = col
                merges += 1
                lows[i] = low
                if low < 0:
                    state[i] = ZERO
                    break
                b = trivial_birth(G, col[0][H_DIM], low)
                if b >= 0 and b != col[0][H_OWNER]:
                    state[i] = NEED_TRIVIAL
                    break
                if store_find(store, low) >= 0:
                    state[i] = NEED_STORE
                    break
                j = 0
                continue
            j += 1
    return merges


@njit(cache=True, nogil=True)
def clear_batch(G, cols, state, lows, n, store, out, record_same_diameter):
    """Commit finished columns and compact the survivors to the front.

    Pairs whose birth and death share a diameter edge have zero persistence;
    unless ``record_same_diameter`` is set they are committed but only counted.
    """
    w = 0
    for i in range(n):
        s = state[i]
        col = cols[i]
        if s == ZERO:
            out = out_essential(out, col[0][H_OWNER])
        elif s == FINAL:
            owner = col[0][H_OWNER]
            if trivial_birth(G, col[0][H_DIM], lows[i]) == owner:
                out = out_trivial(out, owner, lows[i], True)
            else:
                store = commit(store, col, lows[i])
                if record_same_diameter or (owner >> 32) != (lows[i] >> 32):
                    out = out_pair(out, owner, lows[i])
                else:
                    out[0][O_ZERO_SKIPPED] += 1
        else:
            cols[w] = col
            state[w] = s
            lows[w] = lows[i]
            w += 1
    for _ in range(n - w):
        cols.pop()
    return store, out


class Batch:
    """Columns in flight plus their state flags and current lows."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.cols = empty_columns()
        self.state = np.full(capacity, NEW, dtype=np.int64)
        self.lows = np.full(capacity, -1, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.cols)

    def room(self) -> int:
        return self.capacity - len(self.cols)

    def states(self) -> list[str]:
        return [STATE_NAMES[int(s)] for s in self.state[: len(self)]]


class Scheduler:
    """Owns the worker pool for one computation; use as a context manager."""

    def __init__(self, threads: int = 1):
        self.threads = threads
        self.pool: Optional[ThreadPoolExecutor] = None

    def __enter__(self):
        if self.threads > 1:
            self.pool = ThreadPoolExecutor(max_workers=self.threads)
        return self

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.shutdown(wait=True)
            self.pool = None

    def chunks(self, n: int) -> list[tuple[int, int]]:
        k = min(self.threads, n)
        bounds = np.linspace(0, n, k + 1).astype(np.int64)
        return [(int(bounds[i]), int(bounds[i + 1])) for i in range(k)]

    def parallel_phase(self, G, batch: Batch, store) -> None:
        n = len(batch)
        if n == 0:
            return
        if self.pool is None or n == 1:
            reduce_range(G, batch.cols, batch.state, batch.lows, 0, n, store)
            return
        jobs = [self.pool.submit(reduce_range, G, batch.cols, batch.state, batch.lows,
                                 lo, hi, store) for lo, hi in self.chunks(n)]
        for job in jobs:
            job.result()


def parallel_phase(G, batch: Batch, store, scheduler: Optional[Scheduler] = None) -> None:
    (scheduler or Scheduler(1)).parallel_phase(G, batch, store)


def serial_phase(G, batch: Batch, store) -> int:
    return int(serial_sweep(G, batch.cols, batch.state, batch.lows, len(batch), store))


def clearance_phase(G, batch: Batch, store, out, record_same_diameter: bool = True):
    """Commit finished columns; returns ``(store, out, committed_count)``."""
    before = len(batch)
    store, out = clear_batch(G, batch.cols, batch.state, batch.lows, before, store, out,
                             record_same_diameter)
    return store, out, before - len(batch)
