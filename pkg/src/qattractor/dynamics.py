"""Synchronous Boolean network semantics and the exhaustive attractor oracle.

State encoding used throughout the package: gene ``i`` (0-based, file order)
is bit ``n - 1 - i`` of the state index, so the display string lists genes
left to right as a most-significant-bit-first binary numeral.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bnet import And, BoolExpr, Const, NetworkSpec, Not, Or, Var, MAX_GENES
from .errors import CapacityExceeded, NotOnAttractor

ENCODING = "gene0-msb"


def to_display(x: int, n: int) -> str:
    return format(int(x), f"0{n}b")


def from_display(bits: str) -> int:
    return int(bits, 2)


def gene_bit(x: int, i: int, n: int) -> int:
    return (int(x) >> (n - 1 - i)) & 1


def eval_expr(expr: BoolExpr, state: int, spec: NetworkSpec) -> int:
    if isinstance(expr, Var):
        return gene_bit(state, spec.index(expr.name), spec.n)
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Not):
        return 1 - eval_expr(expr.child, state, spec)
    if isinstance(expr, And):
        return eval_expr(expr.left, state, spec) & eval_expr(expr.right, state, spec)
    return eval_expr(expr.left, state, spec) | eval_expr(expr.right, state, spec)


def eval_expr_array(expr: BoolExpr, columns: dict[str, np.ndarray], size: int) -> np.ndarray:
    """Evaluate ``expr`` elementwise; ``columns`` maps gene name -> bool array."""
    if isinstance(expr, Var):
        return columns[expr.name]
    if isinstance(expr, Const):
        return np.full(size, bool(expr.value))
    if isinstance(expr, Not):
        return ~eval_expr_array(expr.child, columns, size)
    left = eval_expr_array(expr.left, columns, size)
    right = eval_expr_array(expr.right, columns, size)
    return left & right if isinstance(expr, And) else left | right


@dataclass(frozen=True, eq=False)
class AttractorInfo:
    cycle_states: tuple[int, ...]
    basin_size: int
    max_transient: int

    @property
    def period(self) -> int:
        return len(self.cycle_states)

    @property
    def is_static(self) -> bool:
        return len(self.cycle_states) == 1

    def __eq__(self, other):
        if not isinstance(other, AttractorInfo):
            return NotImplemented
        return (self.cycle_states, self.basin_size, self.max_transient) == (
            other.cycle_states, other.basin_size, other.max_transient)

    def __hash__(self):
        return hash(self.cycle_states)


@dataclass(frozen=True, eq=False)
class TransitionTable:
    """Dense successor map over all ``2**n`` states; treat as immutable."""

    succ: np.ndarray
    n: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __getitem__(self, x):
        return int(self.succ[x])

    def power(self, k: int) -> np.ndarray:
        """Array form of the ``k``-fold successor map."""
        cache = self._cache.setdefault("powers", {})
        if k not in cache:
            out = np.arange(self.size, dtype=np.int64)
            for _ in range(k):
                out = self.succ[out]
            out.setflags(write=False)
            cache[k] = out
        return cache[k]

    def step(self, x: int, k: int = 1) -> int:
        for _ in range(k):
            x = int(self.succ[x])
        return x

    @cached_property
    def _labels(self):
        return _label_states(self.succ)

    @cached_property
    def _predecessors(self):
        order = np.argsort(self.succ, kind="stable")
        starts = np.searchsorted(self.succ[order], np.arange(self.size + 1))
        return order, starts


def build_transition_table(spec: NetworkSpec, max_genes: int = MAX_GENES) -> TransitionTable:
    n = spec.n
    if n > max_genes:
        raise CapacityExceeded(f"2^{n} states exceeds the table limit 2^{max_genes}")
    size = 1 << n
    try:
        idx = np.arange(size, dtype=np.int64)
        columns = {g: ((idx >> (n - 1 - i)) & 1).astype(bool) for i, g in enumerate(spec.genes)}
        succ = np.zeros(size, dtype=np.int64)
        for i, rule in enumerate(spec.rules):
            bit = eval_expr_array(rule, columns, size)
            succ |= bit.astype(np.int64) << (n - 1 - i)
    except MemoryError as exc:  # pragma: no cover - depends on host
        raise CapacityExceeded(f"cannot allocate a table of 2^{n} entries") from exc
    succ.setflags(write=False)
    return TransitionTable(succ, n)


def _label_states(succ: np.ndarray):
    """Three-colour pointer chase: returns (cycles, attractor id per state, depth per state)."""
    s = succ.tolist()
    size = len(s)
    UNSEEN, ACTIVE = -1, -2
    label = [UNSEEN] * size
    depth = [0] * size
    cycles: list[list[int]] = []
    for start in range(size):
        if label[start] != UNSEEN:
            continue
        path = []
        x = start
        while label[x] == UNSEEN:
            label[x] = ACTIVE
            path.append(x)
            x = s[x]
        if label[x] == ACTIVE:
            # closed a new cycle on the current path
            k = path.index(x)
            cyc = path[k:]
            cid = len(cycles)
            cycles.append(cyc)
            for y in cyc:
                label[y] = cid
                depth[y] = 0
            del path[k:]
        cid, d = label[x], depth[x]
        for y in reversed(path):
            d += 1
            label[y] = cid
            depth[y] = d
    return cycles, np.asarray(label, dtype=np.int64), np.asarray(depth, dtype=np.int64)


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def find_attractors(table: TransitionTable) -> list[AttractorInfo]:
    """All attractors, ordered by their smallest state; each cycle starts at that state."""
    if "attractors" in table._cache:
        return list(table._cache["attractors"])
    cycles, label, depth = table._labels
    basin = np.bincount(label, minlength=len(cycles))
    longest = np.zeros(len(cycles), dtype=np.int64)
    np.maximum.at(longest, label, depth)
    out = [
        AttractorInfo(_canonical_cycle(c), int(basin[cid]), int(longest[cid]))
        for cid, c in enumerate(cycles)
    ]
    out.sort(key=lambda a: a.cycle_states[0])
    table._cache["attractors"] = tuple(out)
    return out


def basin_of(table: TransitionTable, attractor: AttractorInfo) -> set[int]:
    """Every state whose orbit enters ``attractor``, found by reverse reachability."""
    order, starts = table._predecessors
    seen = set(attractor.cycle_states)
    frontier = list(seen)
    while frontier:
        y = frontier.pop()
        for x in order[starts[y]:starts[y + 1]].tolist():
            if x not in seen:
                seen.add(x)
                frontier.append(x)
    return seen


def basin_mask(table: TransitionTable, attractors) -> np.ndarray:
    """Boolean mask of the union of the basins of ``attractors``."""
    cycles, label, _ = table._labels
    owner = {}
    for cid, cyc in enumerate(cycles):
        owner[min(cyc)] = cid
    ids = [owner[min(a.cycle_states)] for a in attractors]
    return np.isin(label, ids)


def transient_horizon(table: TransitionTable) -> int:
    return int(table._labels[2].max())


def unfold_cycle(table: TransitionTable, s: int) -> list[int]:
    """The attractor cycle through ``s``, starting at ``s``."""
    s = int(s)
    cycle = [s]
    seen = {s}
    x = table[s]
    while x != s:
        if x in seen:
            raise NotOnAttractor(f"state {s} is transient: its orbit re-enters at {x}")
        seen.add(x)
        cycle.append(x)
        x = table[x]
    return cycle


def attractor_of(table: TransitionTable, s: int) -> AttractorInfo:
    """The :class:`AttractorInfo` whose cycle contains ``s``."""
    cycle = unfold_cycle(table, s)
    key = min(cycle)
    for att in find_attractors(table):
        if att.cycle_states[0] == key:
            return att
    raise AssertionError("unreachable: cycle missing from attractor list")


def stg_edges(table: TransitionTable, display: bool = False) -> str:
    """State transition graph as ``from to`` lines."""
    lines = []
    for x, y in enumerate(table.succ.tolist()):
        if display:
            lines.append(f"{to_display(x, table.n)} {to_display(y, table.n)}")
        else:
            lines.append(f"{x} {y}")
    return "\n".join(lines) + "\n"
