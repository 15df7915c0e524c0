"""Gate-level circuit IR.

Qubit 0 is the least-significant bit of a basis index. Multi-controlled gates
are primitive; a control is a ``(qubit, polarity)`` pair where polarity True
fires on |1> and False on |0>.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import IndexOutOfRange

Control = tuple[int, bool]


def _controls(controls) -> tuple[Control, ...]:
    return tuple((int(q), bool(p)) for q, p in controls)


@dataclass(frozen=True)
class X:
    target: int

    @property
    def qubits(self):
        return (self.target,)


@dataclass(frozen=True)
class H:
    target: int

    @property
    def qubits(self):
        return (self.target,)


@dataclass(frozen=True)
class MCX:
    controls: tuple[Control, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", _controls(self.controls))

    @property
    def qubits(self):
        return tuple(q for q, _ in self.controls) + (self.target,)


@dataclass(frozen=True)
class MCPhase:
    """diag(1, e^{i phi}) on ``target``, gated by ``controls``."""

    controls: tuple[Control, ...]
    target: int
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "controls", _controls(self.controls))
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def qubits(self):
        return tuple(q for q, _ in self.controls) + (self.target,)


Gate = Union[X, H, MCX, MCPhase]


def _check_gate(gate: Gate, num_qubits: int):
    qs = gate.qubits
    if len(set(qs)) != len(qs):
        raise ValueError(f"repeated qubit in {gate}")
    for q in qs:
        if not 0 <= q < num_qubits:
            raise IndexOutOfRange(f"qubit {q} outside a {num_qubits}-qubit circuit")


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            _check_gate(g, self.num_qubits)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.num_qubits, self.gates + tuple(gates))

    def remap(self, mapping: Sequence[int], num_qubits: int) -> "Circuit":
        """Relabel qubit ``k`` as ``mapping[k]`` inside a ``num_qubits`` register."""
        m = list(mapping)
        gates = []
        for g in self.gates:
            if isinstance(g, X):
                gates.append(X(m[g.target]))
            elif isinstance(g, H):
                gates.append(H(m[g.target]))
            elif isinstance(g, MCX):
                gates.append(MCX([(m[q], p) for q, p in g.controls], m[g.target]))
            else:
                gates.append(MCPhase([(m[q], p) for q, p in g.controls], m[g.target], g.phi))
        return Circuit(num_qubits, gates)

    def dump(self) -> str:
        return "\n".join(format_gate(g) for g in self.gates)


def format_gate(g: Gate) -> str:
    if isinstance(g, X):
        return f"X {g.target}"
    if isinstance(g, H):
        return f"H {g.target}"
    ctl = ",".join(f"{'+' if p else '-'}{q}" for q, p in g.controls)
    if isinstance(g, MCX):
        return f"MCX [{ctl}] {g.target}"
    return f"MCP [{ctl}] {g.target} {g.phi!r}"


def inverse(c: Circuit) -> Circuit:
    gates = []
    for g in reversed(c.gates):
        if isinstance(g, MCPhase):
            gates.append(MCPhase(g.controls, g.target, -g.phi))
        else:
            gates.append(g)
    return Circuit(c.num_qubits, gates)


def lowered_gate_count(c: Circuit) -> int:
    """Gate count after rewriting each negative control as an X pair."""
    extra = 0
    for g in c.gates:
        if isinstance(g, (MCX, MCPhase)):
            extra += 2 * sum(1 for _, p in g.controls if not p)
    return len(c.gates) + extra


def hadamard_layer(qubits: Iterable[int], num_qubits: int) -> Circuit:
    return Circuit(num_qubits, [H(q) for q in qubits])


def conditional_phase_shifter(n: int, j: int, phi: float) -> Circuit:
    """Phase e^{i phi} on basis state ``j`` of ``n`` qubits, identity elsewhere.

    Built as NOT layer on the zero bits of ``j``, one multi-controlled phase
    (controls on qubits 0..n-2, phase on qubit n-1), then the NOT layer again.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    if not 0 <= j < (1 << n):
        raise IndexOutOfRange(f"basis index {j} outside a {n}-qubit register")
    flips = [X(q) for q in range(n) if not (j >> q) & 1]
    core = MCPhase([(q, True) for q in range(n - 1)], n - 1, phi)
    return Circuit(n, flips + [core] + flips)


def multi_phase_on_set(n: int, states: Iterable[int], phi: float) -> Circuit:
    gates: list[Gate] = []
    for j in sorted(set(states)):
        gates.extend(conditional_phase_shifter(n, j, phi).gates)
    return Circuit(n, gates)

