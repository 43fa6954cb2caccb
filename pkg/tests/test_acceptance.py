"""One test per acceptance criterion; each records a PASS/FAIL/SKIP line."""
import math
import os
import resource
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.spatial.distance import pdist

from cohomrips.cob_edge import find_geq_t, find_next_t, find_smallest_t
from cohomrips.cob_tri import find_geq_h, find_next_h, find_smallest_h
from cohomrips.core import PairedIndex
from cohomrips.filtration import build_filtration, memory_account
from cohomrips.ingest import enumerate_edges, read_input
from cohomrips.oracle import (
    drop_zero, oracle_enumerate, oracle_reduce_cohomology, oracle_reduce_column, oracle_reduce_row,
    pair_counts,
)
from cohomrips.pipeline import (
    Options, assemble_output, compute_diagrams, compute_h0, compute_h1, compute_h2,
)
from cohomrips.reduce import is_trivial_pair

from conftest import (
    BruteIndex, diameter, octahedron, random_cloud, random_graph, record_criterion, record_skip,
)

INF = math.inf
GIB = 1 << 30


def _cloud(seed):
    rng = np.random.default_rng(10_000 + seed)
    return rng.random((int(rng.integers(4, 16)), 3))


def _clifford_torus(n, seed=0):
    rng = np.random.default_rng(seed)
    th, ph = rng.uniform(0, 2 * np.pi, n), rng.uniform(0, 2 * np.pi, n)
    return np.column_stack([np.cos(th), np.sin(th), np.cos(ph), np.sin(ph)])


def _cli(*args, timeout=None):
    return subprocess.run([sys.executable, "-m", "cohomrips", *args], capture_output=True,
                          text=True, timeout=timeout)


def test_criterion_1_oracle_equivalence():
    configs = [Options(clearing=c, engine=e, threads=t, batch_dim1=b, batch_dim2=b)
               for c in (True, False) for e in ("fastcol", "row") for t in (1, 4)
               for b in (1, 100)]
    compute_diagrams(_cloud(0), INF, configs[0])  # compile outside the timed region
    t0 = time.perf_counter()
    mismatches = []
    runs = 0
    for seed in range(100):
        pts = _cloud(seed)
        for tau in (INF, 0.7 * diameter(pts)):
            D = oracle_enumerate(enumerate_edges(pts, tau))
            oracles = [assemble_output(drop_zero(fn(D)), keep_zero=True)
                       for fn in (oracle_reduce_column, oracle_reduce_row,
                                  oracle_reduce_cohomology)]
            for opts in configs:
                got = assemble_output(compute_diagrams(pts, tau, opts).diagrams)
                runs += 1
                if any(got != want for want in oracles):
                    mismatches.append((seed, tau, opts))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60
    record_criterion(1, ok, f"{runs} runs, {len(mismatches)} mismatches, {elapsed:.1f} s "
                            "(limit 60 s)")
    assert not mismatches, mismatches[:5]
    assert elapsed < 60


def test_criterion_2_sq4_golden(sq4_points):
    full = assemble_output(compute_diagrams(sq4_points, INF).diagrams)
    cut = assemble_output(compute_diagrams(sq4_points, 1.2).diagrams)
    ok = (full == {0: [(0.0, 1.0)] * 3 + [(0.0, INF)], 1: [(1.0, 1.4142135623730951)], 2: []}
          and cut[1] == [(1.0, INF)])
    record_criterion(2, ok, f"H1 = {full[1]}, H1 at 1.2 = {cut[1]}")
    assert ok


DATASETS = (
    # (environment variable, label, threshold, expected edge count)
    ("COHOMRIPS_O3", "o3", 1.0, 327614),
    ("COHOMRIPS_TORUS4", "torus4", 0.15, 2242206),
)


def test_criterion_3_published_edge_counts():
    missing = [var for var, *_ in DATASETS if not os.path.isfile(os.environ.get(var, ""))]
    if missing:
        reason = ("published datasets are not available offline; set "
                  + ", ".join(missing) + " to the point-cloud files to run this check")
        record_skip(3, reason)
        pytest.skip(reason)
    counts = {}
    for var, label, tau, want in DATASETS:
        counts[label] = (len(enumerate_edges(read_input(os.environ[var], "cloud"), tau)), want)
    ok = all(got == want for got, want in counts.values())
    record_criterion(3, ok, ", ".join(f"{k}: {g} (want {w})" for k, (g, w) in counts.items()))
    assert ok


def test_criterion_4_memory_formula(sq4):
    filts = [sq4, build_filtration(enumerate_edges(octahedron()))]
    filts += [build_filtration(enumerate_edges(random_cloud(s), 0.8)) for s in range(20)]
    bad = [f for f in filts if memory_account(f) != 12 * f.n_edges + 3 * f.n]
    ok = not bad and memory_account(sq4) == 84
    record_criterion(4, ok, f"{len(filts)} filtrations, {len(bad)} off formula, SQ4 = "
                            f"{memory_account(sq4)}")
    assert ok


def _trivial_check(filt, run, dim):
    if dim == 1:
        bv = filt.values[run.trivial[:, 0]]
    else:
        bv = filt.values[run.trivial[:, 0] >> 32]
    dv = filt.values[run.trivial[:, 1] >> 32]
    if not np.array_equal(bv, dv):
        return False
    # nothing stored is a trivial pair
    for birth, low in run.pairs.tolist():
        b = is_trivial_pair(filt, PairedIndex.from_code(low), dim)
        if b is not None and (b == birth if dim == 1 else b.code() == birth):
            return False
    return True


def test_criterion_5_trivial_pair_completeness():
    bad = []
    checked = 0
    for seed in range(100):
        pts = _cloud(seed)
        for tau in (INF, 0.7 * diameter(pts)):
            e = enumerate_edges(pts, tau)
            filt = build_filtration(e)
            want = pair_counts(oracle_reduce_column(oracle_enumerate(e)))
            opts = Options(keep_zero=True)
            _, dead = compute_h0(filt)
            _, deaths1, run1 = compute_h1(filt, dead, opts)
            _, run2 = compute_h2(filt, deaths1, opts)
            for dim, run in ((1, run1), (2, run2)):
                checked += 1
                got = run.stats["stored"] + run.stats["trivial"]
                if got != want[dim] or len(run.trivial) != run.stats["trivial"] \
                        or not _trivial_check(filt, run, dim):
                    bad.append((seed, tau, dim, got, want[dim]))
    record_criterion(5, not bad, f"{checked} dimension runs, {len(bad)} count mismatches")
    assert not bad, bad[:5]


def test_criterion_6_coboundary_primitives():
    rng = np.random.default_rng(6)
    bad = 0
    n_targets = 0
    for g in range(50):
        filt = build_filtration(random_graph(1000 + g, max_n=12, ties=g % 2 == 1))
        brute = BruteIndex(filt)
        edge_cob = {k: [PairedIndex(*t) for t in brute.edge_cob(k)] for k in range(filt.n_edges)}
        tris = [(v, PairedIndex(*t)) for v, t in brute.triangles()]
        tri_cob = {t: [PairedIndex(*h) for h in brute.tri_cob(v)] for v, t in tris}
        for k, want in edge_cob.items():
            got, phi = [], find_smallest_t(filt, k)
            while phi.current is not None:
                got.append(phi.current)
                phi = find_next_t(filt, phi)
            bad += got != want
        for t, want in tri_cob.items():
            got, phi = [], find_smallest_h(filt, t)
            while phi.current is not None:
                got.append(phi.current)
                phi = find_next_h(filt, phi)
            bad += got != want
        hi = filt.n_edges + 1
        for _ in range(1000):
            tgt = PairedIndex(int(rng.integers(0, hi)), int(rng.integers(0, max(filt.n, hi))))
            if tris and rng.random() < 0.5:
                t = tris[int(rng.integers(len(tris)))][1]
                first = next((h for h in tri_cob[t] if h >= tgt), None)
                bad += find_geq_h(filt, t, tgt).current != first
            elif filt.n_edges:
                k = int(rng.integers(filt.n_edges))
                first = next((x for x in edge_cob[k] if x >= tgt), None)
                bad += find_geq_t(filt, k, tgt).current != first
            n_targets += 1
    record_criterion(6, bad == 0, f"50 graphs, {n_targets} geq targets, {bad} mismatches")
    assert bad == 0


def test_criterion_7_determinism(tmp_path):
    pts = _clifford_torus(2000, seed=7)
    tau = float(np.sort(pdist(pts))[50_000 - 1])
    src = tmp_path / "torus2000.txt"
    np.savetxt(src, pts, fmt="%.17g")
    t0 = time.perf_counter()
    outs = []
    for threads in ("1", "4"):
        prefix = tmp_path / f"t{threads}"
        res = _cli("run", "--input", str(src), "--threshold", repr(tau), "--threads", threads,
                   "--output", str(prefix))
        assert res.returncode == 0, res.stderr
        outs.append([Path(f"{prefix}_H{d}.txt").read_bytes() for d in range(3)])
    elapsed = time.perf_counter() - t0
    n_edges = len(enumerate_edges(pts, tau))
    ok = outs[0] == outs[1] and elapsed < 120
    record_criterion(7, ok, f"n=2000, {n_edges} edges, threads 1 vs 4 "
                            f"{'identical' if outs[0] == outs[1] else 'DIFFERENT'}, "
                            f"{elapsed:.1f} s (limit 120 s)")
    assert outs[0] == outs[1]
    assert elapsed < 120


@pytest.mark.slow
def test_criterion_8_scale_smoke(tmp_path):
    src = tmp_path / "torus50k.txt"
    np.savetxt(src, _clifford_torus(50_000, seed=0), fmt="%.17g")
    t0 = time.perf_counter()
    res = _cli("run", "--input", str(src), "--threshold", "0.15", "--benchmark",
               "--output", str(tmp_path / "t"), timeout=1800)
    elapsed = time.perf_counter() - t0
    # the largest child so far; every earlier child is much smaller
    peak = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss * 1024
    assert res.returncode == 0, res.stderr
    essentials = [sum(1 for l in (tmp_path / f"t_H{d}.txt").read_text().splitlines()
                      if l.endswith(" inf")) for d in range(3)]
    ok = elapsed < 1800 and peak < 8 * GIB
    record_criterion(8, ok, f"50000 points at 0.15: {elapsed:.0f} s (limit 1800 s), "
                            f"peak {peak / GIB:.2f} GiB (limit 8 GiB), "
                            f"essential classes H0/H1/H2 = {essentials}")
    print(res.stdout)
    assert elapsed < 1800
    assert peak < 8 * GIB
