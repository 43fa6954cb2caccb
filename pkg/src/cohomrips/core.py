"""Simplex identifiers and the paired-index order.

Vertices are dense integer ids, edges are identified by their position in
the sorted edge filtration, and triangles/tetrahedra by a pair of keys
``<primary, secondary>``: the primary key is the order of the diameter edge,
the secondary key is the remaining vertex (triangles) or the order of the
remaining edge (tetrahedra).

Inside the numba kernels a paired index travels as a single int64 code,
``primary << 32 | secondary``, whose integer order coincides with the
paired-index order.
"""
from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple, Sequence

# Orders and vertex ids must fit the low 32 bits of a code and the primary
# key must keep the code non-negative, so both are capped below 2**31.
MAX_KEY = (1 << 31) - 1
LOW_MASK = 0xFFFFFFFF


class MissingEdgeError(KeyError):
    """A pair of vertices has no permissible edge under the threshold."""


class CapacityError(ValueError):
    """Input too large for 32-bit vertex ids / edge orders."""


class ResourceRefusal(RuntimeError):
    """A configured memory or size cap would be exceeded."""


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class PairedIndex(NamedTuple):
    primary: int
    secondary: int

    def code(self) -> int:
        return encode(self.primary, self.secondary)

    @classmethod
    def from_code(cls, code: int) -> "PairedIndex":
        return cls(code >> 32, code & LOW_MASK)


def encode(primary: int, secondary: int) -> int:
    return (int(primary) << 32) | int(secondary)


def decode(code: int) -> PairedIndex:
    return PairedIndex(int(code) >> 32, int(code) & LOW_MASK)


def max_sentinel(n_edges: int) -> PairedIndex:
    """``<n_e, 0>``, larger than every valid paired index."""
    return PairedIndex(n_edges, 0)


def compare_paired(a: PairedIndex, b: PairedIndex) -> Ordering:
    if a.primary != b.primary:
        return Ordering.GREATER if a.primary > b.primary else Ordering.LESS
    if a.secondary != b.secondary:
        return Ordering.GREATER if a.secondary > b.secondary else Ordering.LESS
    return Ordering.EQUAL


def check_capacity(n_points: int, n_edges: int = 0) -> None:
    if n_points > MAX_KEY:
        raise CapacityError(f"{n_points} points exceed the 32-bit vertex id range")
    if n_edges >= MAX_KEY:
        raise CapacityError(f"{n_edges} edges exceed the 32-bit edge order range")


def _order(filt, u: int, v: int) -> int:
    o = filt.edge_order(u, v)
    if o is None:
        raise MissingEdgeError(f"no permissible edge between {u} and {v}")
    return o


def triangle_index(vertices: Sequence[int], filt) -> PairedIndex:
    a, b, c = (int(x) for x in vertices)
    if len({a, b, c}) != 3:
        raise ValueError(f"degenerate triangle {vertices!r}")
    best = max(((_order(filt, a, b), c), (_order(filt, a, c), b), (_order(filt, b, c), a)))
    return PairedIndex(*best)


def tetra_index(vertices: Sequence[int], filt) -> PairedIndex:
    vs = [int(x) for x in vertices]
    if len(set(vs)) != 4:
        raise ValueError(f"degenerate tetrahedron {vertices!r}")
    best = None
    for i in range(4):
        for j in range(i + 1, 4):
            rest = [vs[k] for k in range(4) if k != i and k != j]
            cand = (_order(filt, vs[i], vs[j]), _order(filt, rest[0], rest[1]))
            if best is None or cand[0] > best[0]:
                best = cand
    return PairedIndex(*best)


def triangle_vertices(t: PairedIndex, filt) -> tuple[int, int, int]:
    """``(a, b, c)``: endpoints ``a < b`` of the diameter edge, then the apex."""
    a, b = filt.endpoints(t.primary)
    return a, b, int(t.secondary)


def tetra_vertices(h: PairedIndex, filt) -> tuple[int, int, int, int]:
    a, b = filt.endpoints(h.primary)
    c, d = filt.endpoints(h.secondary)
    return a, b, c, d
