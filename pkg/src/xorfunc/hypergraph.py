"""Edge generation and peeling for the two hypergraph layouts.

An edge is three vertices derived deterministically from a 64-bit local
signature.  The tripartite layout draws one vertex per third of the
vertex range; the segmented layout picks a start segment with a
monotone fixed-point map and one vertex in each of three consecutive
segments.

Peeling supports the four strategy combinations: the incidence table
can hold XORs of local signatures (peel by signature) or of edge
indices (peel by index), and the visit can keep full payloads on the
edge stack (high-memory) or only vertex indices in a single shared
vector (low-memory).  Whatever the combination, the result assigns
values so that the three slab cells of every edge XOR to its target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import get_kernels
from .kernels import pyref

HIGH_MEMORY = "high_memory"
LOW_MEMORY = "low_memory"

_KIND_CODE = {"mwhc": 0, "fuse": 1}


@dataclass(frozen=True)
class EdgeGenerator:
    """Fixed per-shard edge layout: vertex budget and how edges map into it."""

    kind: str
    num_vertices: int
    segment_size: int = 0
    num_segments: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_CODE:
            raise ValueError(f"unknown construction {self.kind!r}")
        if self.kind == "mwhc":
            if self.num_vertices % 3 != 0 or self.num_vertices <= 0:
                raise ValueError("tripartite vertex count must be a positive multiple of 3")
        else:
            if self.segment_size <= 0 or self.segment_size % 64 != 0:
                raise ValueError("segment size must be a positive multiple of 64")
            if self.num_segments < 1:
                raise ValueError("need at least one start segment")
            if self.num_vertices != (self.num_segments + 2) * self.segment_size:
                raise ValueError("vertex count must equal (segments + 2) * segment size")
        if self.num_vertices >= 2**32:
            raise ValueError("per-shard vertex budgets beyond 2^32 are unsupported")

    @property
    def part_size(self) -> int:
        return self.num_vertices // 3 if self.kind == "mwhc" else 0

    def kernel_args(self):
        return (
            np.uint64(_KIND_CODE[self.kind]),
            np.uint64(self.num_segments),
            np.uint64(self.segment_size),
            np.uint64(self.part_size),
        )

    @classmethod
    def tripartite(cls, max_keys: int, c: float) -> "EdgeGenerator":
        """Layout for random tripartite graphs sized for max_keys edges."""
        part = max(1, math.ceil(c * max(max_keys, 1) / 3.0))
        return cls(kind="mwhc", num_vertices=3 * part)

    @classmethod
    def segmented(cls, max_keys: int, c: float, segment_size: int) -> "EdgeGenerator":
        """Segmented layout sized for max_keys edges at expansion c.

        The segment size rounds up to a multiple of 64 and the total
        vertex budget rounds up to a whole number of segments.
        """
        segment_size = max(64, ((segment_size + 63) // 64) * 64)
        target = math.ceil(c * max(max_keys, 1))
        num_segments = max(1, math.ceil(target / segment_size) - 2)
        return cls(
            kind="fuse",
            num_vertices=(num_segments + 2) * segment_size,
            segment_size=segment_size,
            num_segments=num_segments,
        )


def make_edge(local: int, gen: EdgeGenerator) -> tuple[int, int, int]:
    """Scalar edge derivation (reference path; batch work uses kernels)."""
    return pyref.edge_from_local(
        local, _KIND_CODE[gen.kind], gen.num_segments, gen.segment_size, gen.part_size
    )


def edges_from_locals(locals_: np.ndarray, gen: EdgeGenerator):
    k = get_kernels()
    m = locals_.shape[0]
    v0 = np.empty(m, np.uint32)
    v1 = np.empty(m, np.uint32)
    v2 = np.empty(m, np.uint32)
    k.edges_from_locals(locals_, *gen.kernel_args(), v0, v1, v2)
    return v0, v1, v2


@dataclass
class Incidence:
    """XOR-compressed incidence: per vertex a degree/side word and the
    XOR of incident edge representations."""

    gen: EdgeGenerator
    by_index: bool
    num_edges: int
    degside: np.ndarray
    xor_pay: np.ndarray
    xor_val: np.ndarray

    def degrees(self) -> np.ndarray:
        return self.degside >> 2


def build_incidence(
    gen: EdgeGenerator,
    locals_: np.ndarray,
    values: np.ndarray | None = None,
    by_index: bool = False,
) -> Incidence:
    """Build degree and XOR tables for the edges of the given locals."""
    k = get_kernels()
    m = locals_.shape[0]
    if values is None:
        values = np.zeros(m, np.uint64)
    v0, v1, v2 = edges_from_locals(locals_, gen)
    nv = gen.num_vertices
    degside = np.zeros(nv, np.uint32)
    xor_pay = np.zeros(nv, np.uint64)
    xor_val = np.zeros(nv if not by_index else 0, np.uint64)
    k.build_incidence(
        v0, v1, v2, locals_, values,
        np.uint64(1 if by_index else 0), degside, xor_pay, xor_val,
    )
    return Incidence(gen, by_index, m, degside, xor_pay, xor_val)


@dataclass
class PeelResult:
    """Peel order plus whatever state the chosen strategy needs to replay it."""

    strategy: str
    incidence: Incidence
    n_peeled: int
    # high-memory: full payload stack in peel order
    order_pay: np.ndarray | None = None
    order_val: np.ndarray | None = None
    order_side: np.ndarray | None = None
    # low-memory: shared vector; peeled vertices live in [eptr:], last first
    vec: np.ndarray | None = None
    eptr: int = 0
    core_indices: np.ndarray | None = field(default=None)

    @property
    def success(self) -> bool:
        return self.n_peeled == self.incidence.num_edges


def peel(
    inc: Incidence,
    locals_: np.ndarray,
    values: np.ndarray | None = None,
    strategy: str = HIGH_MEMORY,
) -> PeelResult:
    """Stack-based peeling visit over a freshly built incidence table.

    Mutates the incidence (degrees drop as edges peel).  Failure is a
    result with a non-empty 2-core, not an error.
    """
    k = get_kernels()
    m = inc.num_edges
    nv = inc.gen.num_vertices
    if values is None:
        values = np.zeros(m, np.uint64)
    by_index = np.uint64(1 if inc.by_index else 0)
    args = inc.gen.kernel_args()
    if strategy == HIGH_MEMORY:
        stack = np.empty(nv, np.uint32)
        order_pay = np.empty(m, np.uint64)
        order_val = np.empty(m, np.uint64)
        order_side = np.empty(m, np.uint8)
        peeled = int(
            k.peel_high(
                inc.degside, inc.xor_pay, inc.xor_val, locals_, values, by_index,
                *args, stack, order_pay, order_val, order_side,
            )
        )
        result = PeelResult(
            strategy, inc, peeled,
            order_pay=order_pay[:peeled],
            order_val=order_val[:peeled],
            order_side=order_side[:peeled],
        )
    elif strategy == LOW_MEMORY:
        vec = np.zeros(nv, np.uint32)
        eptr = int(
            k.peel_low(
                inc.degside, inc.xor_pay, inc.xor_val, locals_, by_index,
                *args, vec,
            )
        )
        result = PeelResult(strategy, inc, nv - eptr, vec=vec, eptr=eptr)
    else:
        raise ValueError(f"unknown peel strategy {strategy!r}")
    if not result.success:
        result.core_indices = find_core_edges(inc, locals_)
    return result


def find_core_edges(inc: Incidence, locals_: np.ndarray) -> np.ndarray:
    """Indices of unpeeled edges: those whose vertices all kept degree >= 1."""
    k = get_kernels()
    mask = np.empty(inc.num_edges, np.uint8)
    k.find_core(locals_, *inc.gen.kernel_args(), inc.degside, mask)
    return np.flatnonzero(mask)


def assign(
    result: PeelResult,
    locals_: np.ndarray,
    values: np.ndarray,
    words: np.ndarray,
    b: int,
) -> None:
    """Replay the peel order backwards, writing b-bit values into words.

    After this, the slab cells of every peeled edge XOR to its value;
    core vertices written beforehand (by a solver) are left untouched.
    """
    k = get_kernels()
    mask = np.uint64((1 << b) - 1)
    bu = np.uint64(b)
    args = result.incidence.gen.kernel_args()
    if result.strategy == HIGH_MEMORY:
        k.assign_high(
            result.order_pay, result.order_val, result.order_side,
            result.n_peeled, *args, words, bu, mask,
        )
    else:
        inc = result.incidence
        k.assign_low(
            result.vec, result.eptr, inc.degside, inc.xor_pay, inc.xor_val,
            locals_, values, np.uint64(1 if inc.by_index else 0),
            *args, words, bu, mask,
        )


def verify_edges(
    gen: EdgeGenerator,
    locals_: np.ndarray,
    values: np.ndarray,
    words: np.ndarray,
    b: int,
) -> int:
    """Number of edges whose three slab cells do not XOR to their value."""
    k = get_kernels()
    return int(
        k.verify_edges(
            locals_, values, *gen.kernel_args(),
            words, np.uint64(b), np.uint64((1 << b) - 1),
        )
    )


def check_peel_order(result: PeelResult, locals_: np.ndarray) -> bool:
    """Validate the defining property of a peel order.

    Walking the order backwards and marking the vertices of each edge,
    no edge's peeled vertex may already be marked: the peeled vertex of
    an edge never occurs in any edge peeled after it.
    """
    gen = result.incidence.gen
    seen = np.zeros(gen.num_vertices, dtype=bool)
    if result.strategy == HIGH_MEMORY:
        entries = [
            (int(result.order_pay[j]), int(result.order_side[j]))
            for j in range(result.n_peeled - 1, -1, -1)
        ]
    else:
        inc = result.incidence
        entries = []
        for i in range(result.eptr, len(result.vec)):
            v = int(result.vec[i])
            pay = int(inc.xor_pay[v])
            local = int(locals_[pay]) if inc.by_index else pay
            edge = make_edge(local, gen)
            entries.append((local, edge.index(v)))
    for local, side in entries:
        edge = make_edge(local, gen)
        if seen[edge[side]]:
            return False
        for v in edge:
            seen[v] = True
    return True
