"""Exact statevector simulation with dense and sparse backends.

Qubit ``k`` is bit ``k`` of the basis index. The dense backend views the
amplitudes as a ``[2] * q`` tensor (axis ``q - 1 - k`` belongs to qubit ``k``)
and updates slices in place. The sparse backend keeps a dict of nonzero
amplitudes, which stays small for the permutation-heavy circuits used here.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .circuit import H, MCPhase, MCX, X, Circuit, Gate
from .errors import CapacityExceeded, IndexOutOfRange

SQRT_HALF = 1.0 / math.sqrt(2.0)
# circuits up to this width default to the dense backend
AUTO_DENSE_QUBITS = 12
DEFAULT_MAX_AMPLITUDES = 1 << 26
DEFAULT_MAX_SUPPORT = 1 << 22
# amplitudes this small after a Hadamard are cancellation residue
SPARSE_EPS = 1e-14


class StateVector:
    """Pure state of ``num_qubits`` qubits, stored densely or sparsely."""

    def __init__(self, num_qubits: int, dense: np.ndarray | None = None,
                 sparse: dict[int, complex] | None = None):
        if (dense is None) == (sparse is None):
            raise ValueError("give exactly one of dense or sparse amplitudes")
        self.num_qubits = num_qubits
        self.dense = dense
        self.sparse = sparse

    @classmethod
    def basis(cls, num_qubits: int, index: int = 0, sparse: bool = False) -> "StateVector":
        if not 0 <= index < (1 << num_qubits):
            raise IndexOutOfRange(f"basis index {index} outside {num_qubits} qubits")
        if sparse:
            return cls(num_qubits, sparse={int(index): 1.0 + 0j})
        vec = _alloc(num_qubits, DEFAULT_MAX_AMPLITUDES)
        vec[index] = 1.0
        return cls(num_qubits, dense=vec)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        vec = np.asarray(amplitudes, dtype=complex).copy()
        q = int(round(math.log2(len(vec))))
        if 1 << q != len(vec):
            raise ValueError("amplitude count must be a power of two")
        return cls(q, dense=vec)

    @property
    def is_sparse(self) -> bool:
        return self.sparse is not None

    def copy(self) -> "StateVector":
        if self.is_sparse:
            return StateVector(self.num_qubits, sparse=dict(self.sparse))
        return StateVector(self.num_qubits, dense=self.dense.copy())

    def to_dense(self, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> np.ndarray:
        if not self.is_sparse:
            return self.dense
        vec = _alloc(self.num_qubits, max_amplitudes)
        for k, a in self.sparse.items():
            vec[k] = a
        return vec

    def as_dense(self, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> "StateVector":
        return StateVector(self.num_qubits, dense=self.to_dense(max_amplitudes).copy())

    def as_sparse(self) -> "StateVector":
        if self.is_sparse:
            return self.copy()
        nz = np.flatnonzero(self.dense)
        return StateVector(self.num_qubits, sparse={int(k): complex(self.dense[k]) for k in nz})

    def items(self):
        """(index, amplitude) pairs for nonzero amplitudes, ascending index."""
        if self.is_sparse:
            return sorted(self.sparse.items())
        nz = np.flatnonzero(self.dense)
        return [(int(k), complex(self.dense[k])) for k in nz]

    def amplitude(self, index: int) -> complex:
        if self.is_sparse:
            return self.sparse.get(index, 0j)
        return complex(self.dense[index])

    def norm(self) -> float:
        if self.is_sparse:
            return math.sqrt(sum(abs(a) ** 2 for a in self.sparse.values()))
        return float(np.linalg.norm(self.dense))

    def marginal(self, qubits: Sequence[int]) -> np.ndarray:
        """Outcome probabilities over ``qubits``; the first listed qubit is the top bit."""
        m = len(qubits)
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise IndexOutOfRange(f"qubit {q} outside {self.num_qubits} qubits")
        out = np.zeros(1 << m)
        if self.is_sparse:
            for k, a in self.sparse.items():
                y = 0
                for q in qubits:
                    y = (y << 1) | ((k >> q) & 1)
                out[y] += abs(a) ** 2
            return out
        q = self.num_qubits
        probs = (np.abs(self.dense) ** 2).reshape([2] * q)
        keep = [q - 1 - b for b in qubits]
        drop = tuple(ax for ax in range(q) if ax not in keep)
        reduced = probs.sum(axis=drop) if drop else probs
        remaining = sorted(keep)
        reduced = np.transpose(reduced, [remaining.index(ax) for ax in keep])
        return reduced.reshape(-1)


def _alloc(num_qubits: int, max_amplitudes: int) -> np.ndarray:
    size = 1 << num_qubits
    if size > max_amplitudes:
        raise CapacityExceeded(f"dense state of 2^{num_qubits} amplitudes exceeds budget {max_amplitudes}")
    return np.zeros(size, dtype=complex)


# -- gate kernels ------------------------------------------------------------

def _dense_index(q: int, controls, target: int, value: int):
    idx = [slice(None)] * q
    for c, pol in controls:
        idx[q - 1 - c] = 1 if pol else 0
    idx[q - 1 - target] = value
    return tuple(idx)


def _apply_dense(state: StateVector, gate: Gate):
    q = state.num_qubits
    psi = state.dense.reshape([2] * q)
    controls = getattr(gate, "controls", ())
    i0 = _dense_index(q, controls, gate.target, 0)
    i1 = _dense_index(q, controls, gate.target, 1)
    if isinstance(gate, (X, MCX)):
        tmp = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = tmp
    elif isinstance(gate, H):
        a0 = psi[i0].copy()
        a1 = psi[i1]
        psi[i0] = (a0 + a1) * SQRT_HALF
        psi[i1] = (a0 - a1) * SQRT_HALF
    else:
        psi[i1] *= np.exp(1j * gate.phi)


def _masks(controls):
    pos = neg = 0
    for c, pol in controls:
        if pol:
            pos |= 1 << c
        else:
            neg |= 1 << c
    return pos, neg


def _apply_sparse(state: StateVector, gate: Gate):
    amps = state.sparse
    t = 1 << gate.target
    if isinstance(gate, H):
        new: dict[int, complex] = {}
        for k, a in amps.items():
            lo = k & ~t
            a = a * SQRT_HALF
            new[lo] = new.get(lo, 0j) + a
            new[lo | t] = new.get(lo | t, 0j) + (-a if k & t else a)
        state.sparse = {k: a for k, a in new.items() if abs(a) > SPARSE_EPS}
        return
    pos, neg = _masks(getattr(gate, "controls", ()))
    if isinstance(gate, (X, MCX)):
        state.sparse = {
            (k ^ t if (k & pos) == pos and not (k & neg) else k): a for k, a in amps.items()
        }
    else:
        ph = np.exp(1j * gate.phi)
        sel = pos | t
        for k in amps:
            if (k & sel) == sel and not (k & neg):
                amps[k] *= ph


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` in place and return ``state``."""
    for qb in gate.qubits:
        if not 0 <= qb < state.num_qubits:
            raise IndexOutOfRange(f"qubit {qb} outside {state.num_qubits} qubits")
    if state.is_sparse:
        _apply_sparse(state, gate)
    else:
        _apply_dense(state, gate)
    return state


def apply_pauli(state: StateVector, qubit: int, kind: str) -> StateVector:
    if kind in ("Z", "Y"):
        apply_gate(state, MCPhase((), qubit, math.pi))
    if kind in ("X", "Y"):
        apply_gate(state, X(qubit))
    if kind == "Y":
        # Y = i X Z
        if state.is_sparse:
            state.sparse = {k: 1j * a for k, a in state.sparse.items()}
        else:
            state.dense *= 1j
    return state


def _pick_backend(backend: str, initial: StateVector) -> str:
    if backend == "auto":
        return "dense" if initial.num_qubits <= AUTO_DENSE_QUBITS else "sparse"
    if backend not in ("dense", "sparse"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def run(circuit: Circuit, initial: StateVector, backend: str = "auto",
        max_amplitudes: int = DEFAULT_MAX_AMPLITUDES,
        max_support: int = DEFAULT_MAX_SUPPORT) -> StateVector:
    """Apply ``circuit`` to a copy of ``initial``.

    ``auto`` picks dense storage for narrow registers and sparse storage
    otherwise; a sparse state whose support outgrows ``max_support`` is
    densified if that fits ``max_amplitudes``.
    """
    if circuit.num_qubits != initial.num_qubits:
        raise ValueError(f"circuit has {circuit.num_qubits} qubits, state has {initial.num_qubits}")
    kind = _pick_backend(backend, initial)
    state = initial.as_dense(max_amplitudes) if kind == "dense" else initial.as_sparse()
    for gate in circuit.gates:
        apply_gate(state, gate)
        if state.is_sparse and len(state.sparse) > max_support:
            if backend == "sparse":
                raise CapacityExceeded(f"sparse support {len(state.sparse)} exceeds {max_support}")
            state = state.as_dense(max_amplitudes)
    return state


def unitary(circuit: Circuit) -> np.ndarray:
    """Dense matrix of ``circuit``, built column by column through the simulator."""
    q = circuit.num_qubits
    dim = 1 << q
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        mat[:, col] = run(circuit, StateVector.basis(q, col), backend="dense").dense
    return mat


# -- measurement -------------------------------------------------------------

@dataclass
class MeasurementHistogram:
    shots: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.counts = dict(sorted((k, int(v)) for k, v in self.counts.items() if v))

    def probabilities(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}

    def merge(self, other: "MeasurementHistogram") -> "MeasurementHistogram":
        counts = dict(self.counts)
        for k, v in other.counts.items():
            counts[k] = counts.get(k, 0) + v
        return MeasurementHistogram(self.shots + other.shots, counts)

    def mode(self) -> str:
        """Most frequent outcome; ties go to the smallest bit string."""
        return max(sorted(self.counts), key=lambda k: self.counts[k])

    def to_dict(self) -> dict:
        return {"shots": self.shots, "counts": dict(self.counts)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        rows = ["bitstring,count"] + [f"{k},{v}" for k, v in self.counts.items()]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "MeasurementHistogram":
        return cls(int(data["shots"]), {str(k): int(v) for k, v in data["counts"].items()})


def sample_distribution(probs: np.ndarray, width: int, shots: int, rng) -> MeasurementHistogram:
    if shots < 1:
        raise ValueError("shots must be positive")
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    p = p / p.sum()
    counts = np.random.default_rng(rng).multinomial(shots, p)
    nz = np.flatnonzero(counts)
    return MeasurementHistogram(shots, {format(int(y), f"0{width}b"): int(counts[y]) for y in nz})


def sample(state: StateVector, qubits: Sequence[int], shots: int, seed=None) -> MeasurementHistogram:
    """Draw ``shots`` measurements of ``qubits``; bit strings list qubits in the given order."""
    return sample_distribution(state.marginal(qubits), len(qubits), shots, seed)


# -- Pauli noise trajectories ------------------------------------------------

@dataclass(frozen=True)
class NoiseConfig:
    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0
    seed: int = 0

    def __post_init__(self):
        ps = (self.p_x, self.p_y, self.p_z)
        if min(ps) < 0 or sum(ps) > 1 + 1e-12:
            raise ValueError(f"invalid Pauli probabilities {ps}")

    @classmethod
    def depolarizing(cls, p: float, seed: int = 0) -> "NoiseConfig":
        return cls(p / 3, p / 3, p / 3, seed)

    @property
    def is_noiseless(self) -> bool:
        return self.p_x == self.p_y == self.p_z == 0

    def trajectory_rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, index]))


def run_trajectory(circuit: Circuit, initial: StateVector, noise: NoiseConfig,
                   rng: np.random.Generator, backend: str = "auto") -> StateVector:
    """One Monte Carlo unraveling: a Pauli error may follow each gate on each qubit it touches."""
    slots = [(i, qb) for i, g in enumerate(circuit.gates) for qb in g.qubits]
    draws = rng.random(len(slots))
    cut_x = noise.p_x
    cut_y = cut_x + noise.p_y
    cut_z = cut_y + noise.p_z
    errors: dict[int, list[tuple[int, str]]] = {}
    for (i, qb), u in zip(slots, draws.tolist()):
        if u < cut_z:
            kind = "X" if u < cut_x else "Y" if u < cut_y else "Z"
            errors.setdefault(i, []).append((qb, kind))
    if not errors:
        return run(circuit, initial, backend)
    state = run(Circuit(circuit.num_qubits), initial, backend)
    for i, gate in enumerate(circuit.gates):
        apply_gate(state, gate)
        for qb, kind in errors.get(i, ()):
            apply_pauli(state, qb, kind)
    return state


def _split_shots(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def run_noisy(circuit: Circuit, initial: StateVector, noise: NoiseConfig, trajectories: int,
              measured_qubits: Sequence[int], shots_per_trajectory: int,
              backend: str = "auto") -> MeasurementHistogram:
    """Merged histogram over ``trajectories`` independently seeded noisy replays."""
    total = trajectories * shots_per_trajectory
    return run_noisy_shots(circuit, initial, noise, trajectories, measured_qubits, total, backend)


def run_noisy_shots(circuit, initial, noise: NoiseConfig, trajectories: int,
                    measured_qubits, shots: int, backend: str = "auto") -> MeasurementHistogram:
    """As :func:`run_noisy` but with ``shots`` spread as evenly as possible over trajectories."""
    if noise.is_noiseless:
        # every trajectory is the same pure state
        final = run(circuit, initial, backend)
        return sample(final, measured_qubits, shots, noise.seed)
    width = len(measured_qubits)
    hist = MeasurementHistogram(0, {})
    for t, k in enumerate(_split_shots(shots, trajectories)):
        rng = noise.trajectory_rng(t)
        final = run_trajectory(circuit, initial, noise, rng, backend)
        if k:
            hist = hist.merge(sample_distribution(final.marginal(measured_qubits), width, k, rng))
    return hist


def noisy_distribution(circuit: Circuit, initial: StateVector, noise: NoiseConfig,
                       trajectories: int, measured_qubits: Sequence[int],
                       backend: str = "auto") -> np.ndarray:
    """Trajectory average of the exact outcome distribution over ``measured_qubits``."""
    acc = np.zeros(1 << len(measured_qubits))
    for t in range(trajectories):
        final = run_trajectory(circuit, initial, noise, noise.trajectory_rng(t), backend)
        acc += final.marginal(measured_qubits)
    return acc / trajectories
