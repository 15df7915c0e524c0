"""Reversible circuits for Boolean update rules.

Each rule is brought into positive-polarity Reed-Muller form (an XOR of AND
monomials); every monomial becomes one multi-controlled X onto a fresh target.
The T-step evolution writes step ``r`` into register ``r``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bnet import BoolExpr, NetworkSpec, variables
from .circuit import MCX, Circuit, X
from .dynamics import eval_expr_array
from .errors import CapacityExceeded, QubitCollision

Monomial = frozenset  # of gene indices; the empty monomial is the constant 1


@dataclass(frozen=True)
class RegisterLayout:
    T: int
    n: int

    @property
    def num_qubits(self) -> int:
        return (self.T + 1) * self.n

    def qubit(self, register: int, gene: int) -> int:
        return register * self.n + gene

    def register(self, r: int) -> list[int]:
        """Qubits of register ``r`` in gene order (display order)."""
        return [r * self.n + i for i in range(self.n)]

    def index_qubits(self, r: int) -> list[int]:
        """Qubit holding bit ``k`` of a state index, for k = 0..n-1."""
        return [r * self.n + (self.n - 1 - k) for k in range(self.n)]

    def embed(self, r: int, x: int) -> int:
        """Global basis bits that put state index ``x`` into register ``r``."""
        out = 0
        for k, q in enumerate(self.index_qubits(r)):
            if (x >> k) & 1:
                out |= 1 << q
        return out

    def extract(self, r: int, g: int) -> int:
        """State index held by register ``r`` of global basis index ``g``."""
        x = 0
        for k, q in enumerate(self.index_qubits(r)):
            if (g >> q) & 1:
                x |= 1 << k
        return x


def _moebius(truth: np.ndarray, k: int) -> np.ndarray:
    """GF(2) Moebius transform: truth table -> Reed-Muller coefficients."""
    coeff = truth.astype(np.uint8).copy()
    for bit in range(k):
        step = 1 << bit
        view = coeff.reshape(-1, 2 * step)
        view[:, step:] ^= view[:, :step]
    return coeff


def pprm_expansion(expr: BoolExpr, spec: NetworkSpec) -> frozenset:
    """Set of monomials (frozensets of gene indices) whose XOR equals ``expr``."""
    support = sorted(spec.index(v) for v in variables(expr))
    k = len(support)
    size = 1 << k
    idx = np.arange(size, dtype=np.int64)
    # local bit b of the assignment index drives gene support[b]
    columns = {spec.genes[g]: ((idx >> b) & 1).astype(bool) for b, g in enumerate(support)}
    truth = eval_expr_array(expr, columns, size)
    coeff = _moebius(truth, k)
    out = set()
    for m in np.flatnonzero(coeff).tolist():
        out.add(frozenset(support[b] for b in range(k) if (m >> b) & 1))
    return frozenset(out)


def _monomial_order(m: frozenset):
    return (len(m), sorted(m))


def synthesize_update(
    expr: BoolExpr,
    spec: NetworkSpec,
    input_qubits: Sequence[int],
    target_qubit: int,
    num_qubits: int | None = None,
) -> Circuit:
    """XOR ``expr`` evaluated on ``input_qubits`` (one per gene) into ``target_qubit``."""
    if target_qubit in input_qubits:
        raise QubitCollision(f"target qubit {target_qubit} is also an input")
    if num_qubits is None:
        num_qubits = max(list(input_qubits) + [target_qubit]) + 1
    gates = []
    for mono in sorted(pprm_expansion(expr, spec), key=_monomial_order):
        if not mono:
            gates.append(X(target_qubit))
        else:
            gates.append(MCX([(input_qubits[g], True) for g in sorted(mono)], target_qubit))
    return Circuit(num_qubits, gates)


def synthesize_evolution(spec: NetworkSpec, T: int, max_qubits: int = 4096) -> Circuit:
    if T < 1:
        raise ValueError("evolution needs at least one step")
    layout = RegisterLayout(T, spec.n)
    if layout.num_qubits > max_qubits:
        raise CapacityExceeded(f"{layout.num_qubits} qubits exceeds the limit {max_qubits}")
    forms = [sorted(pprm_expansion(rule, spec), key=_monomial_order) for rule in spec.rules]
    gates = []
    for r in range(1, T + 1):
        src = layout.register(r - 1)
        for i, form in enumerate(forms):
            tgt = layout.qubit(r, i)
            for mono in form:
                if not mono:
                    gates.append(X(tgt))
                else:
                    gates.append(MCX([(src[g], True) for g in sorted(mono)], tgt))
    return Circuit(layout.num_qubits, gates)
