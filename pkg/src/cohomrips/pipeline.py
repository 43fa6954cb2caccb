"""End-to-end computation of the H0, H1 and H2 persistence diagrams.

H0 comes from union-find over the sorted edges.  H1 and H2 are computed
as cohomology: simplices are streamed in reverse filtration order through
the batch scheduler.  Deaths found in one dimension are skipped
(cleared) in the next, since their coboundary columns would reduce to zero.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from .cob_tri import smallest_h
from .filtration import FiltrationIndex, build_filtration
from .ingest import Source, enumerate_edges
from .parallel import (
    O_CLEARED, O_ESS, O_PAIRS, O_TRIV, O_TRIV_SEEN, O_VISITED, O_ZERO_SKIPPED, Batch,
    BatchConfig, Scheduler, clearance_phase, out_essential, out_new, out_trivial, serial_phase,
)
from .reduce import ENGINES, NEW, S_NREC, col_new, col_push, col_push_smallest, store_new

INF = math.inf


@dataclass
class Options:
    maxdim: int = 2
    clearing: bool = True
    engine: str = "fastcol"
    threads: int = 1
    batch_dim1: int = 1000
    batch_dim2: int = 100
    keep_zero: bool = False
    mode: str = "sparse"

    def __post_init__(self):
        if self.maxdim not in (0, 1, 2):
            raise ValueError("maxdim must be 0, 1 or 2")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")

    def batch_config(self) -> BatchConfig:
        return BatchConfig(self.batch_dim1, self.batch_dim2, self.threads)


@dataclass
class PersistenceDiagram:
    dim: int
    pairs: list = field(default_factory=list)  # (birth, death); death may be inf

    def finite(self) -> list:
        return [p for p in self.pairs if p[1] != INF]

    def essential(self) -> list:
        return [p for p in self.pairs if p[1] == INF]

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class DimensionRun:
    """Raw simplex-level output of one cohomology dimension."""

    dim: int
    pairs: np.ndarray         # (birth id, death code) of stored pairs
    trivial: np.ndarray       # recorded trivial pairs, same layout
    essentials: np.ndarray    # births of essential classes
    stats: dict

    def death_codes(self) -> np.ndarray:
        return np.unique(np.concatenate((self.pairs[:, 1], self.trivial[:, 1])))


@dataclass
class Result:
    diagrams: dict
    timings: dict
    stats: dict
    filtration: Optional[FiltrationIndex] = None


# ------------------------------------------------------------------ H0


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def union_find_deaths(n, eu, ev):
    parent = np.arange(n)
    dead = np.zeros(eu.shape[0], np.bool_)
    for k in range(eu.shape[0]):
        a = _find(parent, np.int64(eu[k]))
        b = _find(parent, np.int64(ev[k]))
        if a != b:
            # the smaller root survives
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
            dead[k] = True
    return dead


def compute_h0(filt: FiltrationIndex):
    """Diagram and boolean death-edge mask."""
    dead = union_find_deaths(np.int64(filt.n), filt.eu, filt.ev)
    deaths = filt.values[dead]
    pairs = [(0.0, float(d)) for d in deaths]
    pairs += [(0.0, INF)] * (filt.n - int(dead.sum()))
    return PersistenceDiagram(0, pairs), dead


# ------------------------------------------------------------- streams


@njit(cache=True)
def fill_h1(G, cur, cols, state, lows, cap, h0dead, clearing, row, out):
    """Pull edges in reverse order into the batch until it holds ``cap`` columns."""
    while len(cols) < cap and cur[0] >= 0:
        e = cur[0]
        cur[0] = e - 1
        out[0][O_VISITED] += 1
        if clearing and h0dead[e]:
            out[0][O_CLEARED] += 1
            continue
        mc = G.min_cob[e]
        if mc < 0:
            if not h0dead[e]:
                out = out_essential(out, e)
            continue
        if (mc >> 32) == e:
            out = out_trivial(out, e, mc, True)
            continue
        col = col_new(np.int64(1), e, row, np.int64(8))
        col = col_push_smallest(G, col, e)
        n = len(cols)
        cols.append(col)
        state[n] = NEW
        lows[n] = -1
    return out


@njit(cache=True)
def fill_h2(G, cur, buf, deaths, cols, state, lows, cap, clearing, row, keep_trivial, out):
    """Pull triangles in reverse order into the batch.

    ``cur`` holds the next edge, the position in ``buf`` (apexes of the
    current edge, ascending), the current edge and the pointer into the
    sorted ``deaths`` of the dimension below.
    """
    while len(cols) < cap:
        if cur[1] < 0:
            e = cur[0]
            if e < 0:
                break
            cur[0] = e - 1
            a = G.eu[e]
            b = G.ev[e]
            pa = G.nb_ptr[a]
            pb = G.nb_ptr[b]
            da = G.deg[a]
            db = G.deg[b]
            ia = 0
            ib = 0
            m = 0
            while ia < da and ib < db:
                x = G.nb_vtx[pa + ia]
                y = G.nb_vtx[pb + ib]
                if x < y:
                    ia += 1
                elif x > y:
                    ib += 1
                else:
                    if np.int64(G.nb_ord[pa + ia]) < e and np.int64(G.nb_ord[pb + ib]) < e:
                        buf[m] = x
                        m += 1
                    ia += 1
                    ib += 1
            cur[1] = m - 1
            cur[2] = e
            continue
        e = cur[2]
        c = buf[cur[1]]
        cur[1] -= 1
        t = (e << 32) | c
        out[0][O_VISITED] += 1
        p = cur[3]
        while p >= 0 and deaths[p] > t:
            p -= 1
        cur[3] = p
        dead = p >= 0 and deaths[p] == t
        if dead and clearing:
            out[0][O_CLEARED] += 1
            continue
        code, ia, ib, ic, fl = smallest_h(G, t)
        if code < 0:
            if not dead:
                out = out_essential(out, t)
            continue
        if (code >> 32) == e and np.int64(G.ev[code & 0xFFFFFFFF]) == c:
            out = out_trivial(out, t, code, keep_trivial)
            continue
        col = col_new(np.int64(2), t, row, np.int64(8))
        col = col_push(col, code, t, ia, ib, ic, fl)
        n = len(cols)
        cols.append(col)
        state[n] = NEW
        lows[n] = -1
    return out


def _drive(filt, dim, fill, opts: Options, scheduler: Scheduler) -> DimensionRun:
    G = filt.graph()
    batch = Batch(opts.batch_config().batch_size(dim))
    store = store_new(np.int64(1024))
    out = out_new(np.int64(1024))
    rounds = merges = 0
    while True:
        out = fill(G, batch, out)
        if len(batch) == 0:
            break
        rounds += 1
        scheduler.parallel_phase(G, batch, store)
        merges += serial_phase(G, batch, store)
        store, out, _ = clearance_phase(G, batch, store, out, dim == 1 or opts.keep_zero)
    ohdr, pairs, ess, triv = out
    stats = {
        "stored": int(store[0][S_NREC]),
        "trivial": int(ohdr[O_TRIV_SEEN]),
        "visited": int(ohdr[O_VISITED]),
        "cleared": int(ohdr[O_CLEARED]),
        "zero_unrecorded": int(ohdr[O_ZERO_SKIPPED]),
        "rounds": rounds,
        "merges": merges,
    }
    return DimensionRun(dim, pairs[: ohdr[O_PAIRS]].copy(), triv[: ohdr[O_TRIV]].copy(),
                        ess[: ohdr[O_ESS]].copy(), stats)


def run_h1(filt: FiltrationIndex, h0dead: np.ndarray, opts: Options,
           scheduler: Scheduler) -> DimensionRun:
    cur = np.array([filt.n_edges - 1], dtype=np.int64)
    cap = opts.batch_config().batch_size(1)
    row = np.int64(opts.engine == "row")

    def fill(G, batch, out):
        return fill_h1(G, cur, batch.cols, batch.state, batch.lows, cap, h0dead,
                       opts.clearing, row, out)

    run = _drive(filt, 1, fill, opts, scheduler)
    # zero columns of H0 deaths are not classes (only reached without clearing)
    run.essentials = run.essentials[~h0dead[run.essentials]]
    return run


def run_h2(filt: FiltrationIndex, h1_deaths: np.ndarray, opts: Options,
           scheduler: Scheduler) -> DimensionRun:
    deaths = np.ascontiguousarray(np.sort(h1_deaths), dtype=np.int64)
    cur = np.array([filt.n_edges - 1, -1, -1, deaths.shape[0] - 1], dtype=np.int64)
    buf = np.empty(int(filt.deg.max(initial=0)) + 1, dtype=np.int64)
    cap = opts.batch_config().batch_size(2)
    row = np.int64(opts.engine == "row")

    def fill(G, batch, out):
        return fill_h2(G, cur, buf, deaths, batch.cols, batch.state, batch.lows, cap,
                       opts.clearing, row, opts.keep_zero, out)

    run = _drive(filt, 2, fill, opts, scheduler)
    run.essentials = run.essentials[~np.isin(run.essentials, deaths)]
    return run


def _diameter_value(filt: FiltrationIndex, codes: np.ndarray) -> np.ndarray:
    return filt.values[codes >> 32]


def diagram_from_run(filt: FiltrationIndex, run: DimensionRun) -> PersistenceDiagram:
    if run.dim == 1:
        birth = lambda ids: filt.values[ids]  # noqa: E731
    else:
        birth = lambda ids: _diameter_value(filt, ids)  # noqa: E731
    pairs = []
    for arr in (run.pairs, run.trivial):
        if len(arr):
            pairs += list(zip(birth(arr[:, 0]).tolist(), _diameter_value(filt, arr[:, 1]).tolist()))
    pairs += [(b, INF) for b in birth(run.essentials).tolist()]
    return PersistenceDiagram(run.dim, pairs)


def compute_h1(filt: FiltrationIndex, h0_deaths: np.ndarray, opts: Optional[Options] = None,
               scheduler: Optional[Scheduler] = None):
    """Diagram, sorted death-triangle codes (for clearing) and the raw run."""
    opts = opts or Options()
    if scheduler is not None:
        run = run_h1(filt, h0_deaths, opts, scheduler)
    else:
        with Scheduler(opts.threads) as sch:
            run = run_h1(filt, h0_deaths, opts, sch)
    return diagram_from_run(filt, run), run.death_codes(), run


def compute_h2(filt: FiltrationIndex, h1_deaths: np.ndarray, opts: Optional[Options] = None,
               scheduler: Optional[Scheduler] = None):
    opts = opts or Options()
    if scheduler is not None:
        run = run_h2(filt, h1_deaths, opts, scheduler)
    else:
        with Scheduler(opts.threads) as sch:
            run = run_h2(filt, h1_deaths, opts, sch)
    return diagram_from_run(filt, run), run


def assemble_output(diagrams: dict, keep_zero: bool = False) -> dict:
    """Per-dimension pair lists: zero pairs dropped unless kept, essentials last."""
    out = {}
    for dim, dg in diagrams.items():
        pairs = [p for p in getattr(dg, "pairs", dg) if keep_zero or p[0] != p[1]]
        out[dim] = sorted(pairs, key=lambda p: (p[1] == INF, p[0], p[1]))
    return out


def compute_diagrams(source: Source, threshold: float = INF,
                     opts: Optional[Options] = None) -> Result:
    opts = opts or Options()
    timings = {"filtration": 0.0, "neighborhoods": 0.0, "H0": 0.0, "H1": 0.0, "H2": 0.0}
    t0 = time.perf_counter()
    edges = enumerate_edges(source, threshold)
    timings["filtration"] += time.perf_counter() - t0
    filt_times: dict = {}
    filt = build_filtration(edges, mode=opts.mode, timings=filt_times)
    timings["filtration"] += filt_times["filtration"]
    timings["neighborhoods"] = filt_times["neighborhoods"]
    stats: dict = {"n": filt.n, "n_edges": filt.n_edges}

    t0 = time.perf_counter()
    h0, h0dead = compute_h0(filt)
    timings["H0"] = time.perf_counter() - t0
    diagrams = {0: h0}
    with Scheduler(opts.threads) as sch:
        if opts.maxdim >= 1:
            t0 = time.perf_counter()
            run1 = run_h1(filt, h0dead, opts, sch)
            diagrams[1] = diagram_from_run(filt, run1)
            timings["H1"] = time.perf_counter() - t0
            stats[1] = run1.stats
        if opts.maxdim >= 2:
            t0 = time.perf_counter()
            run2 = run_h2(filt, run1.death_codes(), opts, sch)
            diagrams[2] = diagram_from_run(filt, run2)
            timings["H2"] = time.perf_counter() - t0
            stats[2] = run2.stats
    return Result(diagrams, timings, stats, filt)
