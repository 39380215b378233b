"""GF(2) linear systems with b-bit right-hand sides.

Targets are carried as whole words (XOR acts componentwise), so one
elimination solves all b bit-planes at once.  The lazy solver defers
most variables and runs dense elimination only over a small active set;
the dense oracle is an independent textbook elimination used to check
it and to ground-truth solvability in tests.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import hypergraph
from .errors import BuildError

DENSE_ORACLE_MAX_VARS = 4096


@dataclass
class SparseSystem:
    """Equations are (variable-index set, target) pairs over num_vars."""

    equations: list[tuple[tuple[int, ...], int]]
    num_vars: int

    @staticmethod
    def canonical_vars(variables) -> tuple[int, ...]:
        """Drop variables of even multiplicity (x XOR x vanishes)."""
        seen: dict[int, int] = {}
        for v in variables:
            v = int(v)  # keep the bitset math on unbounded Python ints
            seen[v] = seen.get(v, 0) ^ 1
        return tuple(sorted(v for v, parity in seen.items() if parity))


@dataclass
class SolveStats:
    num_vars: int = 0
    num_equations: int = 0
    active: int = 0
    paired: int = 0
    dense_rows: int = 0

    @property
    def active_fraction(self) -> float:
        return self.active / self.num_vars if self.num_vars else 0.0


@dataclass
class Solution:
    solvable: bool
    assignment: np.ndarray | None
    stats: SolveStats = field(default_factory=SolveStats)


def verify_solution(system: SparseSystem, assignment: np.ndarray) -> bool:
    for variables, target in system.equations:
        acc = 0
        for v in SparseSystem.canonical_vars(variables):
            acc ^= int(assignment[v])
        if acc != target:
            return False
    return True


def lazy_gaussian_solve(system: SparseSystem) -> Solution:
    """Solve by deferring variables: idle -> active -> solved.

    An equation left with exactly one idle variable defines that
    variable and is set aside (substituting it out of the rest); when no
    such equation exists, the idle variable occurring in the most
    equations is promoted to the active set.  Equations that run out of
    idle variables become rows of a dense system over the active
    variables only; its solution plus back-substitution through the
    set-aside pairs yields the full assignment.
    """
    neq = len(system.equations)
    nvars = system.num_vars
    stats = SolveStats(num_vars=nvars, num_equations=neq)
    if neq == 0:
        return Solution(True, np.zeros(nvars, np.uint64), stats)

    eq_idle: list[set[int]] = []
    targets: list[int] = []
    var_eqs: dict[int, list[int]] = {}
    for e, (variables, target) in enumerate(system.equations):
        vs = SparseSystem.canonical_vars(variables)
        for v in vs:
            if not 0 <= v < nvars:
                raise ValueError(f"variable {v} out of range")
            var_eqs.setdefault(v, []).append(e)
        eq_idle.append(set(vs))
        targets.append(int(target))

    rows = [0] * neq
    processed = [False] * neq
    queue = deque(e for e in range(neq) if len(eq_idle[e]) <= 1)
    # A variable's occurrence count among unprocessed equations cannot
    # change while it stays idle (equations only retire when down to one
    # idle variable), so one presorted order serves all promotions.
    promotion = sorted(var_eqs, key=lambda v: (-len(var_eqs[v]), v))
    promo_pos = 0
    status = np.zeros(nvars, np.uint8)  # 0 idle, 1 active, 2 solved
    active_cols: list[int] = []
    pairs: list[tuple[int, int]] = []
    dense: list[tuple[int, int]] = []
    nproc = 0

    while nproc < neq:
        while queue:
            e = queue.popleft()
            if processed[e] or len(eq_idle[e]) > 1:
                continue
            processed[e] = True
            nproc += 1
            if not eq_idle[e]:
                dense.append((rows[e], targets[e]))
                continue
            v = next(iter(eq_idle[e]))
            eq_idle[e] = set()
            status[v] = 2
            pairs.append((v, e))
            for f in var_eqs[v]:
                if f == e or processed[f]:
                    continue
                idle = eq_idle[f]
                if v in idle:
                    idle.discard(v)
                    rows[f] ^= rows[e]
                    targets[f] ^= targets[e]
                    if len(idle) <= 1:
                        queue.append(f)
        if nproc == neq:
            break
        while promo_pos < len(promotion) and status[promotion[promo_pos]] != 0:
            promo_pos += 1
        if promo_pos == len(promotion):
            raise AssertionError("unprocessed equations but no idle variable left")
        v = promotion[promo_pos]
        status[v] = 1
        bit = 1 << len(active_cols)
        active_cols.append(v)
        for f in var_eqs[v]:
            if processed[f]:
                continue
            idle = eq_idle[f]
            if v in idle:
                idle.discard(v)
                rows[f] |= bit
                if len(idle) <= 1:
                    queue.append(f)

    stats.active = len(active_cols)
    stats.paired = len(pairs)
    stats.dense_rows = len(dense)

    # Dense elimination over the active columns.
    pivots: dict[int, tuple[int, int]] = {}
    for row, tgt in dense:
        while row:
            p = row.bit_length() - 1
            if p in pivots:
                prow, ptgt = pivots[p]
                row ^= prow
                tgt ^= ptgt
            else:
                pivots[p] = (row, tgt)
                break
        else:
            if tgt != 0:
                return Solution(False, None, stats)

    active_val = [0] * len(active_cols)
    for p in sorted(pivots):
        row, tgt = pivots[p]
        row ^= 1 << p
        while row:
            low = row & -row
            tgt ^= active_val[low.bit_length() - 1]
            row ^= low
        active_val[p] = tgt

    assignment = np.zeros(nvars, np.uint64)
    for col, v in enumerate(active_cols):
        assignment[v] = active_val[col]
    for v, e in reversed(pairs):
        row = rows[e]
        val = targets[e]
        while row:
            low = row & -row
            val ^= active_val[low.bit_length() - 1]
            row ^= low
        assignment[v] = val
    return Solution(True, assignment, stats)


def dense_solve_oracle(system: SparseSystem) -> Solution:
    """Textbook elimination over a full-width row bit-matrix.

    Independent of the lazy path on purpose: this is the ground truth
    the lazy solver is checked against.  Capped to small systems.
    """
    nvars = system.num_vars
    if nvars > DENSE_ORACLE_MAX_VARS:
        raise ValueError(f"dense oracle capped at {DENSE_ORACLE_MAX_VARS} variables")
    stats = SolveStats(num_vars=nvars, num_equations=len(system.equations))
    pivots: dict[int, tuple[int, int]] = {}
    for variables, target in system.equations:
        row = 0
        for v in SparseSystem.canonical_vars(variables):
            if not 0 <= v < nvars:
                raise ValueError(f"variable {v} out of range")
            row |= 1 << v
        tgt = int(target)
        while row:
            p = row.bit_length() - 1
            if p in pivots:
                prow, ptgt = pivots[p]
                row ^= prow
                tgt ^= ptgt
            else:
                pivots[p] = (row, tgt)
                break
        else:
            if tgt != 0:
                return Solution(False, None, stats)
    values = [0] * nvars
    for p in sorted(pivots):
        row, tgt = pivots[p]
        row ^= 1 << p
        while row:
            low = row & -row
            tgt ^= values[low.bit_length() - 1]
            row ^= low
        values[p] = tgt
    assignment = np.array(values, dtype=np.uint64)
    return Solution(True, assignment, stats)


def core_to_system(
    core_indices: np.ndarray,
    locals_: np.ndarray,
    values: np.ndarray,
    gen: hypergraph.EdgeGenerator,
) -> tuple[SparseSystem, np.ndarray]:
    """Equations for the unpeeled edges over their (compacted) vertices.

    Returns the system plus the vertex id of each compact variable, so a
    solution can be written back into the shard's slab.
    """
    if len(core_indices) == 0:
        return SparseSystem([], 0), np.empty(0, np.int64)
    core_locals = locals_[core_indices]
    v0, v1, v2 = hypergraph.edges_from_locals(core_locals, gen)
    all_v = np.concatenate([v0, v1, v2]).astype(np.int64)
    vertex_ids = np.unique(all_v)
    compact = {int(v): i for i, v in enumerate(vertex_ids)}
    equations = []
    for j, i in enumerate(core_indices):
        eq_vars = (compact[int(v0[j])], compact[int(v1[j])], compact[int(v2[j])])
        equations.append((eq_vars, int(values[i])))
    return SparseSystem(equations, len(vertex_ids)), vertex_ids


@dataclass
class SmallShardStats:
    num_edges: int = 0
    peeled: int = 0
    core_edges: int = 0
    core_vars: int = 0
    active: int = 0


def solve_small_shard(
    gen: hypergraph.EdgeGenerator,
    locals_: np.ndarray,
    values: np.ndarray,
    words: np.ndarray,
    b: int,
) -> SmallShardStats:
    """Small-shard path: peel by index, solve the leftover core lazily.

    Peels what peels; the 2-core (if any) becomes a GF(2) system whose
    solution is written into the slab before the peeled part is
    assigned.  Raises BuildError when the core is unsolvable (the caller
    reseeds and retries).
    """
    from .kernels import get_kernels

    stats = SmallShardStats(num_edges=len(locals_))
    inc = hypergraph.build_incidence(gen, locals_, values, by_index=True)
    result = hypergraph.peel(inc, locals_, values, strategy=hypergraph.LOW_MEMORY)
    stats.peeled = result.n_peeled
    if not result.success:
        core_idx = result.core_indices
        stats.core_edges = len(core_idx)
        system, vertex_ids = core_to_system(core_idx, locals_, values, gen)
        stats.core_vars = system.num_vars
        solution = lazy_gaussian_solve(system)
        stats.active = solution.stats.active
        if not solution.solvable:
            raise BuildError(
                f"unsolvable 2-core of {stats.core_edges} edges; reseed required"
            )
        k = get_kernels()
        mask = np.uint64((1 << b) - 1)
        k.slab_set_batch(
            words, vertex_ids.astype(np.uint64), np.uint64(b), mask,
            solution.assignment,
        )
    hypergraph.assign(result, locals_, values, words, b)
    return stats
