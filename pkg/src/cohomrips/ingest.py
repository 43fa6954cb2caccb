"""Input parsing and permissible-edge enumeration.

Three text formats are understood:

* ``cloud``  -- one point per line, coordinates separated by commas and/or
  whitespace; Euclidean metric.
* ``ldm``    -- lower-triangular distance matrix, values in row order
  ``d(1,0); d(2,0) d(2,1); ...`` (line breaks are not significant).
* ``sparse`` -- ``i j d`` triples with 0-based ids; absent pairs have no edge.
"""
from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO, Union

import numpy as np
from scipy.spatial import cKDTree

from .core import check_capacity

FORMATS = ("cloud", "ldm", "sparse")

_SPLIT = re.compile(r"[,\s]+")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class LowerDistances:
    n: int
    values: np.ndarray  # n(n-1)/2 distances in row order


@dataclass(frozen=True)
class EdgeList:
    """Permissible edges with ``u < v``; no pair appears twice."""

    n: int
    u: np.ndarray
    v: np.ndarray
    length: np.ndarray

    def __len__(self) -> int:
        return int(self.u.shape[0])

    def pairs(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(d)) for a, b, d in zip(self.u, self.v, self.length)]


Source = Union[np.ndarray, LowerDistances, EdgeList]


def _tokens(line: str) -> list[str]:
    line = line.strip()
    return [t for t in _SPLIT.split(line) if t] if line else []


def _float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(f"non-numeric token {tok!r}", lineno) from None
    if math.isnan(x):
        raise ParseError("NaN is not a valid value", lineno)
    return x


def load_point_cloud(stream: TextIO) -> np.ndarray:
    rows: list[list[float]] = []
    arity = None
    for lineno, line in enumerate(stream, start=1):
        toks = _tokens(line)
        if not toks:
            continue
        if arity is None:
            arity = len(toks)
        elif len(toks) != arity:
            raise ParseError(f"expected {arity} coordinates, found {len(toks)}", lineno)
        rows.append([_float(t, lineno) for t in toks])
    if not rows:
        raise ParseError("no points in input")
    check_capacity(len(rows))
    return np.asarray(rows, dtype=np.float64)


def load_lower_distance_matrix(stream: TextIO) -> LowerDistances:
    vals: list[float] = []
    for lineno, line in enumerate(stream, start=1):
        for tok in _tokens(line):
            x = _float(tok, lineno)
            if x < 0:
                raise ParseError(f"negative distance {tok}", lineno)
            vals.append(x)
    m = len(vals)
    n = int((1 + math.isqrt(1 + 8 * m)) // 2)
    if n * (n - 1) // 2 != m:
        lo = n if n * (n - 1) // 2 < m else n - 1
        raise ParseError(
            f"{m} values is not a triangular count; nearest valid sizes are "
            f"n={lo} ({lo * (lo - 1) // 2} values) and n={lo + 1} ({(lo + 1) * lo // 2} values)"
        )
    n = max(n, 1)
    check_capacity(n)
    return LowerDistances(n, np.asarray(vals, dtype=np.float64))


def load_sparse_triples(stream: TextIO) -> EdgeList:
    best: dict[tuple[int, int], float] = {}
    top = -1
    for lineno, line in enumerate(stream, start=1):
        toks = _tokens(line)
        if not toks:
            continue
        if len(toks) != 3:
            raise ParseError(f"expected 'i j d', found {len(toks)} fields", lineno)
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError("vertex ids must be whole numbers", lineno) from None
        d = _float(toks[2], lineno)
        if i < 0 or j < 0:
            raise ParseError("vertex ids must be non-negative", lineno)
        if i == j:
            raise ParseError(f"self-loop on vertex {i}", lineno)
        if d < 0:
            raise ParseError(f"negative distance {toks[2]}", lineno)
        key = (i, j) if i < j else (j, i)
        old = best.get(key)
        if old is None or d < old:
            best[key] = d
        top = max(top, i, j)
    if top < 0:
        raise ParseError("no triples in input")
    check_capacity(top + 1, len(best))
    if best:
        keys = np.array(list(best.keys()), dtype=np.int64)
        u, v = keys[:, 0], keys[:, 1]
        length = np.fromiter(best.values(), dtype=np.float64, count=len(best))
    else:
        u = v = np.empty(0, np.int64)
        length = np.empty(0, np.float64)
    return EdgeList(top + 1, u, v, length)


def load(stream: TextIO, fmt: str) -> Source:
    if fmt == "cloud":
        return load_point_cloud(stream)
    if fmt == "ldm":
        return load_lower_distance_matrix(stream)
    if fmt == "sparse":
        return load_sparse_triples(stream)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def read_input(path: Union[str, Path], fmt: str) -> Source:
    with open(path, "r", encoding="utf-8") as fh:
        return load(fh, fmt)


def loads(text: str, fmt: str) -> Source:
    return load(io.StringIO(text), fmt)


def pair_distances(points: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Euclidean distances for index pairs; the one formula used everywhere."""
    diff = points[u] - points[v]
    return np.sqrt(np.sum(diff * diff, axis=1))


def n_points(source: Source) -> int:
    if isinstance(source, np.ndarray):
        return int(source.shape[0])
    return int(source.n)


def enumerate_edges(source: Source, threshold: float = math.inf) -> EdgeList:
    """All pairs at distance ``<= threshold``, sorted lexicographically by ``(u, v)``."""
    if not threshold > 0:
        raise ValueError("threshold must be positive or infinite")
    if isinstance(source, np.ndarray):
        u, v, d = _cloud_edges(source, threshold)
        n = source.shape[0]
    elif isinstance(source, LowerDistances):
        n = source.n
        rows, cols = np.tril_indices(n, -1)
        keep = source.values <= threshold
        u, v, d = cols[keep].astype(np.int64), rows[keep].astype(np.int64), source.values[keep]
    elif isinstance(source, EdgeList):
        n = source.n
        keep = source.length <= threshold
        u, v, d = source.u[keep], source.v[keep], source.length[keep]
    else:
        raise TypeError(f"unsupported source {type(source).__name__}")
    order = np.lexsort((v, u))
    check_capacity(n, len(order))
    return EdgeList(int(n), u[order].astype(np.int64), v[order].astype(np.int64),
                    np.ascontiguousarray(d[order], dtype=np.float64))


def _cloud_edges(points: np.ndarray, threshold: float):
    n = points.shape[0]
    if math.isinf(threshold):
        rows, cols = np.triu_indices(n, 1)
        u, v = rows.astype(np.int64), cols.astype(np.int64)
    else:
        # Widened query radius; the exact cut is applied on our own distances.
        tree = cKDTree(points)
        pairs = tree.query_pairs(threshold * (1 + 1e-9) + 1e-300, output_type="ndarray")
        u = pairs.min(axis=1).astype(np.int64)
        v = pairs.max(axis=1).astype(np.int64)
    d = pair_distances(points, u, v)
    keep = d <= threshold
    return u[keep], v[keep], d[keep]
